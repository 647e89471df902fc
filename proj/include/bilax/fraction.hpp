#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bilax/ring.hpp"

namespace bilax {

/// Quotient of ring elements with a factored denominator.
///
/// Each denominator factor is stored primitive: its monomial content has
/// been pulled out (Laurent parts of u_j move into the numerator, powers of
/// other single variables become their own factors) and its leading
/// coefficient is 1. Rational content therefore lives in the numerator only.
/// Denominators are never reduced by a multivariate gcd; equality is decided
/// by cross-multiplication, i.e. by testing whether the difference has a
/// zero numerator.
class Fraction {
public:
    using Factor = std::pair<RingElement, int>;

    Fraction() = default;
    Fraction(int c) : num_(c) {}                         // NOLINT
    Fraction(const Rational& c) : num_(c) {}             // NOLINT
    Fraction(RingElement num) : num_(std::move(num)) {}  // NOLINT

    static Fraction ratio(const RingElement& num, const RingElement& den) {
        if (den.is_zero()) throw StructuralError("fraction with zero denominator");
        Fraction d = inverse_of_ring(den);
        d.num_ = d.num_ * num;
        if (d.num_.is_zero()) d.den_.clear();
        return d;
    }

    const RingElement& num() const { return num_; }
    const std::vector<Factor>& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.empty(); }

    RingElement den_product() const {
        RingElement p(1);
        for (const auto& [f, e] : den_) p = p * f.pow(e);
        return p;
    }

    Fraction operator-() const {
        Fraction r = *this;
        r.num_ = -r.num_;
        return r;
    }

    friend Fraction operator+(const Fraction& a, const Fraction& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.den_ == b.den_) {
            Fraction r;
            r.num_ = a.num_ + b.num_;
            if (!r.num_.is_zero()) r.den_ = a.den_;
            return r;
        }
        std::vector<Factor> common;
        RingElement fa(1), fb(1);
        auto i = a.den_.begin();
        auto j = b.den_.begin();
        while (i != a.den_.end() || j != b.den_.end()) {
            if (j == b.den_.end() || (i != a.den_.end() && i->first < j->first)) {
                common.push_back(*i);
                fb = fb * i->first.pow(i->second);
                ++i;
            } else if (i == a.den_.end() || j->first < i->first) {
                common.push_back(*j);
                fa = fa * j->first.pow(j->second);
                ++j;
            } else {
                int e = std::max(i->second, j->second);
                common.emplace_back(i->first, e);
                if (e > i->second) fa = fa * i->first.pow(e - i->second);
                if (e > j->second) fb = fb * j->first.pow(e - j->second);
                ++i;
                ++j;
            }
        }
        Fraction r;
        r.num_ = a.num_ * fa + b.num_ * fb;
        if (!r.num_.is_zero()) r.den_ = std::move(common);
        return r;
    }

    friend Fraction operator-(const Fraction& a, const Fraction& b) { return a + (-b); }

    friend Fraction operator*(const Fraction& a, const Fraction& b) {
        Fraction r;
        r.num_ = a.num_ * b.num_;
        if (r.num_.is_zero()) return r;
        r.den_ = merge_add(a.den_, b.den_);
        return r;
    }

    friend Fraction operator/(const Fraction& a, const Fraction& b) { return a * b.inverse(); }

    Fraction& operator+=(const Fraction& o) { return *this = *this + o; }
    Fraction& operator-=(const Fraction& o) { return *this = *this - o; }
    Fraction& operator*=(const Fraction& o) { return *this = *this * o; }

    Fraction scaled(const Rational& s) const {
        Fraction r = *this;
        r.num_ = r.num_.scaled(s);
        if (r.num_.is_zero()) r.den_.clear();
        return r;
    }

    Fraction inverse() const {
        if (is_zero()) throw StructuralError("inverse of zero fraction");
        Fraction r = inverse_of_ring(num_);
        r.num_ = r.num_ * den_product();
        return r;
    }

    Fraction pow(int n) const {
        if (n < 0) return inverse().pow(-n);
        Fraction r(1);
        for (int i = 0; i < n; ++i) r = r * *this;
        return r;
    }

    /// Cancel denominator factors that divide the numerator exactly.
    Fraction reduced() const {
        Fraction r = *this;
        std::vector<Factor> kept;
        for (auto [f, e] : r.den_) {
            while (e > 0) {
                auto q = r.num_.exact_divide(f);
                if (!q) break;
                r.num_ = std::move(*q);
                --e;
            }
            if (e > 0) kept.emplace_back(f, e);
        }
        r.den_ = std::move(kept);
        return r;
    }

    Fraction derivative(Generator g) const {
        Fraction result(num_.derivative(g));
        result.den_ = result.num_.is_zero() ? std::vector<Factor>{} : den_;
        for (const auto& [f, e] : den_) {
            RingElement df = f.derivative(g);
            if (df.is_zero()) continue;
            Fraction term;
            term.num_ = (num_ * df).scaled(Rational(-e));
            if (term.num_.is_zero()) continue;
            term.den_ = merge_add(den_, {Factor{f, 1}});
            result = result + term;
        }
        return result;
    }

    Fraction substitute(Generator g, const Fraction& value) const {
        Fraction r = substitute_ring(num_, g, value);
        for (const auto& [f, e] : den_) {
            if (!f.contains(g)) {
                Fraction piece;
                piece.num_ = RingElement(1);
                piece.den_ = {Factor{f, e}};
                r = r * piece;
            } else {
                r = r * substitute_ring(f, g, value).pow(-e);
            }
        }
        return r;
    }

    Fraction negate_variable(Generator g) const {
        Fraction r;
        r.num_ = num_.negate_variable(g);
        if (den_.empty()) return r;
        // Factors are renormalised, so go through the ring inverse.
        Fraction d(1);
        for (const auto& [f, e] : den_) d = d * inverse_of_ring(f.negate_variable(g)).pow(e);
        return r * d;
    }

    bool contains(Generator g) const {
        if (num_.contains(g)) return true;
        for (const auto& [f, e] : den_)
            if (f.contains(g)) return true;
        return false;
    }

    /// True when every partial derivative with respect to a field generator
    /// vanishes identically, i.e. the value depends on central symbols only.
    bool is_field_free() const {
        if (num_.is_field_free()) {
            bool den_free = true;
            for (const auto& [f, e] : den_) den_free = den_free && f.is_field_free();
            if (den_free) return true;
        }
        for (int s = kSlotE; s < kSlots; ++s) {
            Generator g = Generator::from_slot(s);
            if (contains(g) && !derivative(g).is_zero()) return false;
        }
        return true;
    }

    friend bool operator==(const Fraction& a, const Fraction& b) { return (a - b).is_zero(); }

    std::string to_string() const {
        if (den_.empty()) return num_.to_string();
        std::string d;
        for (std::size_t i = 0; i < den_.size(); ++i) {
            if (i) d += "*";
            const auto& [f, e] = den_[i];
            d += "(" + f.to_string() + ")";
            if (e != 1) d += "^" + std::to_string(e);
        }
        return "(" + num_.to_string() + ")/(" + d + ")";
    }

private:
    static std::vector<Factor> merge_add(const std::vector<Factor>& a, const std::vector<Factor>& b) {
        std::vector<Factor> out;
        auto i = a.begin();
        auto j = b.begin();
        while (i != a.end() || j != b.end()) {
            if (j == b.end() || (i != a.end() && i->first < j->first)) out.push_back(*i++);
            else if (i == a.end() || j->first < i->first) out.push_back(*j++);
            else {
                out.emplace_back(i->first, i->second + j->second);
                ++i;
                ++j;
            }
        }
        return out;
    }

    /// 1/f with f split into numerator-side unit and primitive factors.
    static Fraction inverse_of_ring(const RingElement& f) {
        if (f.is_zero()) throw StructuralError("inverse of zero ring element");
        Monomial content = f.monomial_content();
        Monomial unit_inv;      // inverse of the Laurent (u_j) part of the content
        std::vector<Factor> factors;
        Monomial strip;
        for (int s = 0; s < kSlots; ++s) {
            int e = content[s];
            if (e == 0) continue;
            strip.add(s, -e);
            Generator g = Generator::from_slot(s);
            if (g.allows_negative_powers()) {
                unit_inv.add(s, -e);
            } else {
                factors.emplace_back(RingElement::generator(g), e);
            }
        }
        RingElement prim = f.times_monomial(strip);
        Rational lead = prim.terms().back().second;
        Fraction r;
        r.num_ = RingElement::monomial(unit_inv, Rational(1) / lead);
        if (!prim.is_constant()) factors.emplace_back(prim.scaled(Rational(1) / lead), 1);
        std::sort(factors.begin(), factors.end(), [](const Factor& x, const Factor& y) { return x.first < y.first; });
        r.den_ = std::move(factors);
        return r;
    }

    static Fraction substitute_ring(const RingElement& p, Generator g, const Fraction& value) {
        if (!p.contains(g)) return Fraction(p);
        if (value.is_polynomial() && (value.num_.is_monomial() || p.min_degree(g) >= 0))
            return Fraction(p.substitute(g, value.num_));
        Fraction out;
        for (const auto& [power, coeff] : p.coefficients(g)) out = out + Fraction(coeff) * value.pow(power);
        return out;
    }

    RingElement num_;
    std::vector<Factor> den_;
};

inline std::ostream& operator<<(std::ostream& os, const Fraction& f) { return os << f.to_string(); }

}  // namespace bilax
