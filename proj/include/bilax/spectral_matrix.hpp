#pragma once

#include <initializer_list>
#include <map>
#include <string>
#include <vector>

#include "bilax/poisson.hpp"

namespace bilax {

/// Rational function of the spectral variables with ring coefficients.
/// Spectral variables are central ring generators, so this is a Fraction.
using SpectralScalar = Fraction;

/// Square matrix over SpectralScalar. Dimension 2 is a single auxiliary
/// space; 4 and 8 are tensor powers.
///
/// Tensor index convention: for a two-leg matrix the row index is
/// (i, k) -> 2*i + k with the a-leg first, so entry ((i,k),(j,l)) multiplies
/// E_ij (x) E_kl. Three-leg spaces extend this as 4*i0 + 2*i1 + i2.
class SpectralMatrix {
public:
    SpectralMatrix() = default;
    explicit SpectralMatrix(int dim) : dim_(dim), entries_(static_cast<std::size_t>(dim * dim)) {
        if (dim != 2 && dim != 4 && dim != 8) throw StructuralError("matrix dimension must be 2, 4 or 8");
    }

    SpectralMatrix(std::initializer_list<std::initializer_list<Fraction>> rows)
        : SpectralMatrix(static_cast<int>(rows.size())) {
        int i = 0;
        for (const auto& row : rows) {
            if (static_cast<int>(row.size()) != dim_) throw StructuralError("ragged matrix literal");
            int j = 0;
            for (const auto& v : row) (*this)(i, j++) = v;
            ++i;
        }
    }

    static SpectralMatrix identity(int dim) {
        SpectralMatrix m(dim);
        for (int i = 0; i < dim; ++i) m(i, i) = Fraction(1);
        return m;
    }

    /// Unit matrix E_ij of size 2.
    static SpectralMatrix unit(int i, int j) {
        SpectralMatrix m(2);
        m(i, j) = Fraction(1);
        return m;
    }

    /// Permutation P_ab on C^2 (x) C^2.
    static SpectralMatrix permutation() {
        SpectralMatrix p(4);
        for (int i = 0; i < 2; ++i)
            for (int k = 0; k < 2; ++k) p(2 * i + k, 2 * k + i) = Fraction(1);
        return p;
    }

    int dim() const { return dim_; }
    Fraction& operator()(int i, int j) { return entries_[static_cast<std::size_t>(i * dim_ + j)]; }
    const Fraction& operator()(int i, int j) const { return entries_[static_cast<std::size_t>(i * dim_ + j)]; }

    bool is_zero() const {
        for (const auto& e : entries_)
            if (!e.is_zero()) return false;
        return true;
    }

    friend SpectralMatrix operator+(const SpectralMatrix& a, const SpectralMatrix& b) {
        a.require_same(b);
        SpectralMatrix r(a.dim_);
        for (std::size_t k = 0; k < a.entries_.size(); ++k) r.entries_[k] = a.entries_[k] + b.entries_[k];
        return r;
    }

    friend SpectralMatrix operator-(const SpectralMatrix& a, const SpectralMatrix& b) {
        a.require_same(b);
        SpectralMatrix r(a.dim_);
        for (std::size_t k = 0; k < a.entries_.size(); ++k) r.entries_[k] = a.entries_[k] - b.entries_[k];
        return r;
    }

    SpectralMatrix operator-() const {
        SpectralMatrix r(dim_);
        for (std::size_t k = 0; k < entries_.size(); ++k) r.entries_[k] = -entries_[k];
        return r;
    }

    friend SpectralMatrix operator*(const SpectralMatrix& a, const SpectralMatrix& b) {
        a.require_same(b);
        SpectralMatrix r(a.dim_);
        const int n = a.dim_;
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                const Fraction& aik = a(i, k);
                if (aik.is_zero()) continue;
                for (int j = 0; j < n; ++j) {
                    const Fraction& bkj = b(k, j);
                    if (bkj.is_zero()) continue;
                    r(i, j) += aik * bkj;
                }
            }
        return r;
    }

    friend SpectralMatrix operator*(const Fraction& s, const SpectralMatrix& m) {
        SpectralMatrix r(m.dim_);
        for (std::size_t k = 0; k < m.entries_.size(); ++k) r.entries_[k] = s * m.entries_[k];
        return r;
    }

    /// Entrywise equality after cross-multiplication.
    friend bool operator==(const SpectralMatrix& a, const SpectralMatrix& b) { return (a - b).is_zero(); }

    Fraction trace() const {
        Fraction t;
        for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
        return t;
    }

    template <class Fn>
    SpectralMatrix map(Fn&& fn) const {
        SpectralMatrix r(dim_);
        for (std::size_t k = 0; k < entries_.size(); ++k) r.entries_[k] = fn(entries_[k]);
        return r;
    }

    SpectralMatrix substitute(Generator g, const Fraction& value) const {
        return map([&](const Fraction& f) { return f.substitute(g, value); });
    }

    SpectralMatrix negate_variable(Generator g) const {
        return map([&](const Fraction& f) { return f.negate_variable(g); });
    }

    SpectralMatrix reduced() const {
        return map([](const Fraction& f) { return f.reduced(); });
    }

    /// Entries as canonical strings, row-major.
    std::vector<std::vector<std::string>> to_strings() const {
        std::vector<std::vector<std::string>> out(static_cast<std::size_t>(dim_));
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) out[static_cast<std::size_t>(i)].push_back((*this)(i, j).to_string());
        return out;
    }

    std::string to_string() const {
        std::string s = "[";
        for (int i = 0; i < dim_; ++i) {
            s += i ? ", [" : "[";
            for (int j = 0; j < dim_; ++j) {
                if (j) s += ", ";
                s += (*this)(i, j).to_string();
            }
            s += "]";
        }
        return s + "]";
    }

private:
    void require_same(const SpectralMatrix& o) const {
        if (dim_ != o.dim_) throw StructuralError("matrix dimension mismatch");
    }

    int dim_ = 0;
    std::vector<Fraction> entries_;
};

inline std::ostream& operator<<(std::ostream& os, const SpectralMatrix& m) { return os << m.to_string(); }

/// Kronecker product m (x) n of two 2x2 matrices.
inline SpectralMatrix kron(const SpectralMatrix& m, const SpectralMatrix& n) {
    if (m.dim() != 2 || n.dim() != 2) throw StructuralError("kron expects 2x2 factors");
    SpectralMatrix r(4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            if (m(i, j).is_zero()) continue;
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) r(2 * i + k, 2 * j + l) = m(i, j) * n(k, l);
        }
    return r;
}

/// m_a = m (x) 1.
inline SpectralMatrix embed_a(const SpectralMatrix& m) {
    if (m.dim() != 2) throw StructuralError("embed_a expects a 2x2 matrix");
    return kron(m, SpectralMatrix::identity(2));
}

/// m_b = 1 (x) m.
inline SpectralMatrix embed_b(const SpectralMatrix& m) {
    if (m.dim() != 2) throw StructuralError("embed_b expects a 2x2 matrix");
    return kron(SpectralMatrix::identity(2), m);
}

/// (tr_a M)_{kl} = sum_i M_{(i,k),(i,l)}.
inline SpectralMatrix partial_trace_a(const SpectralMatrix& m4) {
    if (m4.dim() != 4) throw StructuralError("partial_trace_a expects a 4x4 matrix");
    SpectralMatrix r(2);
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
            for (int i = 0; i < 2; ++i) r(k, l) += m4(2 * i + k, 2 * i + l);
    return r;
}

/// Swap the two tensor legs: P M P.
inline SpectralMatrix swap_legs(const SpectralMatrix& m4) {
    if (m4.dim() != 4) throw StructuralError("swap_legs expects a 4x4 matrix");
    SpectralMatrix p = SpectralMatrix::permutation();
    return p * m4 * p;
}

/// Place a two-leg matrix on legs (p, q), p != q, of the three-leg space.
inline SpectralMatrix embed_legs(const SpectralMatrix& m4, int p, int q) {
    if (m4.dim() != 4) throw StructuralError("embed_legs expects a 4x4 matrix");
    if (p == q || p < 0 || q < 0 || p > 2 || q > 2) throw StructuralError("bad leg pair");
    int rest = 3 - p - q;
    auto digit = [](int idx, int leg) { return (idx >> (2 - leg)) & 1; };
    SpectralMatrix r(8);
    for (int row = 0; row < 8; ++row)
        for (int col = 0; col < 8; ++col) {
            if (digit(row, rest) != digit(col, rest)) continue;
            const Fraction& v = m4(2 * digit(row, p) + digit(row, q), 2 * digit(col, p) + digit(col, q));
            if (!v.is_zero()) r(row, col) = v;
        }
    return r;
}

/// The rational r-matrix P/z as a function of the formal variable z.
inline SpectralMatrix rational_r() {
    return Fraction::ratio(RingElement(1), gen(kZ)) * SpectralMatrix::permutation();
}

/// r_ab evaluated at the spectral combination `arg` (e.g. lambda - mu).
inline SpectralMatrix r_at(const SpectralMatrix& r, const RingElement& arg) { return r.substitute(kZ, Fraction(arg)); }

/// r_ab(lambda - mu) for the rational r-matrix: P / (lambda - mu).
inline SpectralMatrix rational_r(Generator lambda, Generator mu) {
    return r_at(rational_r(), gen(lambda) - gen(mu));
}

/// r_ba(arg) = P r_ab(arg) P.
inline SpectralMatrix r_ba_at(const SpectralMatrix& r, const RingElement& arg) { return swap_legs(r_at(r, arg)); }

/// {A_a, B_b}: entry ((i,k),(j,l)) = {A_ij, B_kl}.
inline SpectralMatrix tensor_bracket(const SpectralMatrix& a, const SpectralMatrix& b, const PoissonStructure& ps) {
    if (a.dim() != 2 || b.dim() != 2) throw StructuralError("tensor_bracket expects 2x2 matrices");
    SpectralMatrix r(4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            if (a(i, j).is_zero()) continue;
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) {
                    if (b(k, l).is_zero()) continue;
                    r(2 * i + k, 2 * j + l) = bracket(a(i, j), b(k, l), ps);
                }
        }
    return r;
}

/// Entrywise bracket {s, M_kl} of a scalar with a 2x2 matrix.
inline SpectralMatrix scalar_bracket(const Fraction& s, const SpectralMatrix& m, const PoissonStructure& ps) {
    return m.map([&](const Fraction& e) { return bracket(s, e, ps); });
}

inline Fraction det_2x2(const SpectralMatrix& m) {
    if (m.dim() != 2) throw StructuralError("det_2x2 expects a 2x2 matrix");
    return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
}

/// Adjugate over determinant.
inline SpectralMatrix inverse_2x2(const SpectralMatrix& m) {
    Fraction det = det_2x2(m);
    if (det.is_zero()) throw StructuralError("matrix has identically zero determinant");
    Fraction inv = det.inverse();
    SpectralMatrix adj{{m(1, 1), -m(0, 1)}, {-m(1, 0), m(0, 0)}};
    if (inv.is_polynomial() && inv.num() == RingElement(1)) return adj;
    return inv * adj;
}

/// Large-|var| Laurent expansion of f: the coefficients of var^k for
/// k >= lowest_power. The var-dependent part of the denominator must have a
/// var-free, invertible leading coefficient (true for products of
/// lambda +- mu type factors).
inline std::map<int, Fraction> expand_at_infinity(const Fraction& f, Generator var, int lowest_power) {
    std::map<int, Fraction> out;
    if (f.is_zero()) return out;
    RingElement den_var(1);
    Fraction rest_inv(1);
    for (const auto& [fac, e] : f.den()) {
        if (fac.contains(var)) den_var = den_var * fac.pow(e);
        else rest_inv = rest_inv * Fraction::ratio(RingElement(1), fac.pow(e));
    }
    auto p = f.num().coefficients(var);
    auto d = den_var.coefficients(var);
    if (p.begin()->first < 0 || d.begin()->first < 0)
        throw StructuralError("expand_at_infinity: negative powers of the expansion variable");
    const int deg_d = d.rbegin()->first;
    const RingElement& lead = d.rbegin()->second;
    if (!lead.is_constant()) throw StructuralError("expand_at_infinity: leading coefficient is not a scalar");
    const Rational lead_inv = Rational(1) / lead.constant_value();
    const int top = p.rbegin()->first - deg_d;
    std::map<int, RingElement> q;
    for (int k = top; k >= lowest_power; --k) {
        auto it = p.find(k + deg_d);
        RingElement acc = it == p.end() ? RingElement{} : it->second;
        for (const auto& [i, di] : d) {
            if (i == deg_d) continue;
            auto qi = q.find(k + deg_d - i);
            if (qi != q.end()) acc -= di * qi->second;
        }
        RingElement qk = acc.scaled(lead_inv);
        if (!qk.is_zero()) {
            q.emplace(k, qk);
        }
    }
    for (auto& [k, qk] : q) out.emplace(k, Fraction(qk) * rest_inv);
    return out;
}

}  // namespace bilax
