#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "bilax/generator.hpp"

namespace bilax {

using Rational = mpq_class;

/// Exponent vector over the fixed slot layout. Negative entries are only
/// legal on coordinate slots (u_j = e^{x_j}).
struct Monomial {
    std::array<std::int8_t, kSlots> exp{};

    friend auto operator<=>(const Monomial&, const Monomial&) = default;

    int operator[](int slot) const { return exp[static_cast<std::size_t>(slot)]; }
    int of(Generator g) const { return exp[static_cast<std::size_t>(g.slot())]; }

    bool is_one() const {
        return std::all_of(exp.begin(), exp.end(), [](std::int8_t e) { return e == 0; });
    }

    void add(int slot, int delta) {
        int v = exp[static_cast<std::size_t>(slot)] + delta;
        if (v > 127 || v < -127) throw StructuralError("monomial exponent overflow");
        exp[static_cast<std::size_t>(slot)] = static_cast<std::int8_t>(v);
    }

    friend Monomial operator*(const Monomial& a, const Monomial& b) {
        Monomial r = a;
        for (int s = 0; s < kSlots; ++s) r.add(s, b[s]);
        return r;
    }

    /// True iff every exponent of `b` is at most the matching exponent here.
    bool divisible_by(const Monomial& b) const {
        for (int s = 0; s < kSlots; ++s)
            if (b[s] > (*this)[s]) return false;
        return true;
    }

    friend Monomial operator/(const Monomial& a, const Monomial& b) {
        Monomial r = a;
        for (int s = 0; s < kSlots; ++s) r.add(s, -b[s]);
        return r;
    }

    static Monomial of_generator(Generator g, int power = 1) {
        Monomial m;
        m.add(g.slot(), power);
        return m;
    }

    bool has_field() const {
        for (int s = kSlotE; s < kSlots; ++s)
            if (exp[static_cast<std::size_t>(s)] != 0) return true;
        return false;
    }
};

namespace detail {

inline std::string rational_string(const Rational& q) {
    return q.get_str();
}

/// Renders the exponential and polynomial factors of a monomial.
inline std::string monomial_body(const Monomial& m) {
    std::vector<std::string> parts;
    for (int s = 0; s < kSlots; ++s) {
        if (s >= kSlotU && s < kSlotX) continue;
        int e = m[s];
        if (e == 0) continue;
        std::string name = Generator::from_slot(s).name();
        parts.push_back(e == 1 ? name : name + "^" + std::to_string(e));
    }
    std::string expo;
    for (int s = kSlotX - 1; s >= kSlotU; --s) {
        int e = m[s];
        if (e == 0) continue;
        std::string var = "x_" + std::to_string(s - kSlotU + 1);
        std::string piece;
        if (e == 1) piece = var;
        else if (e == -1) piece = "-" + var;
        else piece = std::to_string(e) + "*" + var;
        if (!expo.empty() && piece.front() != '-') expo += "+";
        expo += piece;
    }
    if (!expo.empty()) parts.push_back("exp(" + expo + ")");
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += "*";
        out += parts[i];
    }
    return out;
}

}  // namespace detail

/// Laurent polynomial in the phase-space generators with exact rational
/// coefficients. Terms are kept sorted by monomial with no zero coefficients.
class RingElement {
public:
    using Term = std::pair<Monomial, Rational>;

    RingElement() = default;
    RingElement(int c) : RingElement(Rational(c)) {}  // NOLINT: literal promotion is intended
    RingElement(const Rational& c) {                  // NOLINT
        if (c != 0) terms_.emplace_back(Monomial{}, c);
    }

    static RingElement generator(Generator g, int power = 1) {
        if (power < 0 && !g.allows_negative_powers())
            throw StructuralError("negative power of non-Laurent generator " + g.name());
        return monomial(Monomial::of_generator(g, power), Rational(1));
    }

    static RingElement monomial(const Monomial& m, const Rational& c) {
        RingElement r;
        if (c != 0) r.terms_.emplace_back(m, c);
        return r;
    }

    /// Build from unsorted, possibly duplicated terms.
    static RingElement from_terms(std::vector<Term> terms) {
        RingElement r;
        r.terms_ = std::move(terms);
        r.normalize();
        return r;
    }

    const std::vector<Term>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first.is_one()); }
    Rational constant_value() const {
        for (const auto& [m, c] : terms_)
            if (m.is_one()) return c;
        return Rational(0);
    }
    bool is_monomial() const { return terms_.size() == 1; }

    /// No generator-bearing monomials other than central ones.
    bool is_field_free() const {
        return std::none_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.first.has_field(); });
    }

    bool contains(Generator g) const {
        int s = g.slot();
        return std::any_of(terms_.begin(), terms_.end(), [s](const Term& t) { return t.first[s] != 0; });
    }

    int max_degree(Generator g) const {
        int s = g.slot();
        int d = 0;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            if (first || m[s] > d) d = m[s];
            first = false;
        }
        return d;
    }

    int min_degree(Generator g) const {
        int s = g.slot();
        int d = 0;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            if (first || m[s] < d) d = m[s];
            first = false;
        }
        return d;
    }

    /// Coefficient of g^power, with g removed.
    RingElement coefficient(Generator g, int power) const {
        int s = g.slot();
        std::vector<Term> out;
        for (const auto& [m, c] : terms_) {
            if (m[s] != power) continue;
            Monomial mm = m;
            mm.add(s, -power);
            out.emplace_back(mm, c);
        }
        return from_terms(std::move(out));
    }

    /// Map power -> coefficient over all powers of g present.
    std::map<int, RingElement> coefficients(Generator g) const {
        int s = g.slot();
        std::map<int, std::vector<Term>> buckets;
        for (const auto& [m, c] : terms_) {
            Monomial mm = m;
            int p = m[s];
            mm.add(s, -p);
            buckets[p].emplace_back(mm, c);
        }
        std::map<int, RingElement> out;
        for (auto& [p, ts] : buckets) out.emplace(p, from_terms(std::move(ts)));
        return out;
    }

    RingElement operator-() const {
        RingElement r = *this;
        for (auto& t : r.terms_) t.second = -t.second;
        return r;
    }

    friend RingElement operator+(const RingElement& a, const RingElement& b) {
        RingElement r;
        r.terms_.reserve(a.terms_.size() + b.terms_.size());
        auto i = a.terms_.begin();
        auto j = b.terms_.begin();
        while (i != a.terms_.end() || j != b.terms_.end()) {
            if (j == b.terms_.end() || (i != a.terms_.end() && i->first < j->first)) {
                r.terms_.push_back(*i++);
            } else if (i == a.terms_.end() || j->first < i->first) {
                r.terms_.push_back(*j++);
            } else {
                Rational c = i->second + j->second;
                if (c != 0) r.terms_.emplace_back(i->first, std::move(c));
                ++i;
                ++j;
            }
        }
        return r;
    }

    friend RingElement operator-(const RingElement& a, const RingElement& b) { return a + (-b); }

    friend RingElement operator*(const RingElement& a, const RingElement& b) {
        if (a.is_zero() || b.is_zero()) return {};
        if (a.is_constant()) return b.scaled(a.terms_[0].second);
        if (b.is_constant()) return a.scaled(b.terms_[0].second);
        std::vector<Term> out;
        out.reserve(a.terms_.size() * b.terms_.size());
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) out.emplace_back(ma * mb, ca * cb);
        return from_terms(std::move(out));
    }

    RingElement& operator+=(const RingElement& o) { return *this = *this + o; }
    RingElement& operator-=(const RingElement& o) { return *this = *this - o; }
    RingElement& operator*=(const RingElement& o) { return *this = *this * o; }

    RingElement scaled(const Rational& s) const {
        if (s == 0) return {};
        RingElement r = *this;
        for (auto& t : r.terms_) t.second *= s;
        return r;
    }

    RingElement times_monomial(const Monomial& m) const {
        RingElement r = *this;
        for (auto& t : r.terms_) t.first = t.first * m;
        // Multiplying by a monomial preserves lexicographic order.
        return r;
    }

    RingElement pow(int n) const {
        if (n < 0) {
            if (!is_monomial()) throw StructuralError("negative power of a non-monomial ring element");
            const auto& [m, c] = terms_[0];
            Monomial inv;
            for (int s = 0; s < kSlots; ++s) {
                if (m[s] != 0 && !Generator::from_slot(s).allows_negative_powers())
                    throw StructuralError("negative power of non-Laurent generator " +
                                          Generator::from_slot(s).name());
                inv.add(s, -m[s]);
            }
            return monomial(inv, Rational(1) / c).pow(-n);
        }
        RingElement result(1);
        RingElement base = *this;
        while (n > 0) {
            if (n & 1) result = result * base;
            n >>= 1;
            if (n) base = base * base;
        }
        return result;
    }

    /// Formal partial derivative with respect to g (Laurent-aware).
    RingElement derivative(Generator g) const {
        int s = g.slot();
        std::vector<Term> out;
        for (const auto& [m, c] : terms_) {
            int e = m[s];
            if (e == 0) continue;
            Monomial mm = m;
            mm.add(s, -1);
            out.emplace_back(mm, c * e);
        }
        return from_terms(std::move(out));
    }

    /// Replace g by `value`. Negative powers of g require `value` to be an
    /// invertible Laurent monomial.
    RingElement substitute(Generator g, const RingElement& value) const {
        int s = g.slot();
        std::map<int, RingElement> powers;
        auto power_of = [&](int e) -> const RingElement& {
            auto it = powers.find(e);
            if (it == powers.end()) it = powers.emplace(e, value.pow(e)).first;
            return it->second;
        };
        std::vector<Term> out;
        for (const auto& [m, c] : terms_) {
            int e = m[s];
            if (e == 0) {
                out.emplace_back(m, c);
                continue;
            }
            Monomial rest = m;
            rest.add(s, -e);
            for (const auto& [pm, pc] : power_of(e).terms_) out.emplace_back(rest * pm, c * pc);
        }
        return from_terms(std::move(out));
    }

    /// Flip the sign of a central variable, e.g. lambda -> -lambda.
    RingElement negate_variable(Generator g) const {
        int s = g.slot();
        RingElement r = *this;
        for (auto& [m, c] : r.terms_)
            if (m[s] % 2 != 0) c = -c;
        return r;
    }

    /// Componentwise minimum exponent over all terms (the monomial content).
    Monomial monomial_content() const {
        Monomial g;
        if (terms_.empty()) return g;
        g = terms_.front().first;
        for (const auto& [m, c] : terms_)
            for (int s = 0; s < kSlots; ++s)
                if (m[s] < g[s]) g.exp[static_cast<std::size_t>(s)] = static_cast<std::int8_t>(m[s]);
        return g;
    }

    /// Exact multivariate division. Returns nullopt when `divisor` does not
    /// divide *this in the Laurent ring.
    std::optional<RingElement> exact_divide(const RingElement& divisor) const {
        if (divisor.is_zero()) throw StructuralError("division by zero ring element");
        if (is_zero()) return RingElement{};
        // Shift both to non-negative exponents so lex order is a well order.
        Monomial shift_a = monomial_content();
        Monomial shift_b = divisor.monomial_content();
        Monomial inv_a, inv_b;
        for (int s = 0; s < kSlots; ++s) {
            inv_a.add(s, -shift_a[s]);
            inv_b.add(s, -shift_b[s]);
        }
        RingElement rem = times_monomial(inv_a);
        RingElement div = divisor.times_monomial(inv_b);
        const auto& [lead_m, lead_c] = div.terms_.back();
        std::vector<Term> quotient;
        while (!rem.is_zero()) {
            const auto& [rm, rc] = rem.terms_.back();
            if (!rm.divisible_by(lead_m)) return std::nullopt;
            Monomial qm = rm / lead_m;
            Rational qc = rc / lead_c;
            quotient.emplace_back(qm, qc);
            rem = rem - div * monomial(qm, qc);
            if (quotient.size() > 100000) return std::nullopt;
        }
        RingElement q = from_terms(std::move(quotient));
        // Undo shifts: a = q * div => a_orig = q * divisor * shift_a / shift_b.
        Monomial back = shift_a / shift_b;
        for (int s = 0; s < kSlots; ++s)
            if (back[s] < 0 && !Generator::from_slot(s).allows_negative_powers()) {
                // Quotient would need a negative power of a polynomial variable;
                // verify it is genuinely absent.
                for (const auto& [m, c] : q.terms_)
                    if (m[s] + back[s] < 0) return std::nullopt;
            }
        return q.times_monomial(back);
    }

    friend bool operator==(const RingElement& a, const RingElement& b) { return a.terms_ == b.terms_; }
    friend bool operator<(const RingElement& a, const RingElement& b) {
        return std::lexicographical_compare(
            a.terms_.begin(), a.terms_.end(), b.terms_.begin(), b.terms_.end(), [](const Term& x, const Term& y) {
                if (x.first != y.first) return x.first < y.first;
                return x.second < y.second;
            });
    }

    /// Canonical textual form; highest terms first.
    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string out;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto& [m, c] = *it;
            Rational mag = abs(c);
            std::string body = detail::monomial_body(m);
            if (first) {
                if (c < 0) out += "-";
            } else {
                out += c < 0 ? " - " : " + ";
            }
            first = false;
            if (body.empty()) {
                out += detail::rational_string(mag);
            } else {
                if (mag != 1) out += detail::rational_string(mag) + "*";
                out += body;
            }
        }
        return out;
    }

    /// Generators (by slot) that occur anywhere in the element.
    std::vector<Generator> support() const {
        std::array<bool, kSlots> seen{};
        for (const auto& [m, c] : terms_)
            for (int s = 0; s < kSlots; ++s)
                if (m[s] != 0) seen[static_cast<std::size_t>(s)] = true;
        std::vector<Generator> out;
        for (int s = 0; s < kSlots; ++s)
            if (seen[static_cast<std::size_t>(s)]) out.push_back(Generator::from_slot(s));
        return out;
    }

private:
    void normalize() {
        std::sort(terms_.begin(), terms_.end(), [](const Term& x, const Term& y) { return x.first < y.first; });
        std::vector<Term> merged;
        merged.reserve(terms_.size());
        for (auto& t : terms_) {
            if (!merged.empty() && merged.back().first == t.first) {
                merged.back().second += t.second;
            } else {
                if (!merged.empty() && merged.back().second == 0) merged.pop_back();
                merged.push_back(std::move(t));
            }
        }
        if (!merged.empty() && merged.back().second == 0) merged.pop_back();
        terms_ = std::move(merged);
    }

    std::vector<Term> terms_;
};

inline std::ostream& operator<<(std::ostream& os, const RingElement& r) { return os << r.to_string(); }

inline RingElement gen(Generator g, int power = 1) { return RingElement::generator(g, power); }
inline RingElement u(int site, int power = 1) { return gen(Generator::u(site), power); }
inline RingElement X(int site) { return gen(Generator::X(site)); }
inline RingElement param(Param p) { return gen(Generator::param(p)); }
inline RingElement rat(long num, long den = 1) {
    Rational q(num, den);
    q.canonicalize();
    return RingElement(q);
}

}  // namespace bilax
