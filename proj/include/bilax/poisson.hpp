#pragma once

#include <array>
#include <optional>
#include <vector>

#include "bilax/fraction.hpp"

namespace bilax {

/// Antisymmetric bracket table on generators, extended to the whole ring by
/// bilinearity and the Leibniz rule: {f, g} = sum_{a,b} d_a f * d_b g * {a, b}.
class PoissonStructure {
public:
    PoissonStructure() = default;

    /// Canonical pairs {X_j, x_k} = delta_jk for j,k = 1..sites, written on
    /// u_k = e^{x_k} as {X_j, u_k} = delta_jk u_k.
    static PoissonStructure toda(int sites) {
        PoissonStructure ps;
        ps.add_canonical(sites);
        return ps;
    }

    /// Toda pairs plus an sl(2) triple commuting with them.
    static PoissonStructure toda_sl2(int sites) {
        PoissonStructure ps = toda(sites);
        ps.add_sl2();
        return ps;
    }

    void add_canonical(int sites) {
        if (sites < 1 || sites > kMaxSites) throw StructuralError("site count out of range");
        for (int j = 1; j <= sites; ++j) {
            declare(Generator::u(j));
            declare(Generator::X(j));
            set(Generator::X(j), Generator::u(j), u(j));
        }
    }

    void add_sl2() {
        declare(Generator::E());
        declare(Generator::F());
        declare(Generator::H());
        set(Generator::H(), Generator::E(), gen(Generator::E()));
        set(Generator::H(), Generator::F(), -gen(Generator::F()));
        set(Generator::E(), Generator::F(), gen(Generator::H()).scaled(2));
    }

    void declare(Generator g) { known_[static_cast<std::size_t>(g.slot())] = true; }

    bool knows(Generator g) const { return g.is_central() || known_[static_cast<std::size_t>(g.slot())]; }

    bool has_sl2() const { return knows(Generator::E()); }

    /// Sets {a, b} = value and {b, a} = -value.
    void set(Generator a, Generator b, const RingElement& value) {
        if (a.is_central() || b.is_central()) throw StructuralError("central generators have zero brackets");
        if (a == b) throw StructuralError("diagonal bracket entries are zero by antisymmetry");
        declare(a);
        declare(b);
        table_[idx(a.slot(), b.slot())] = value;
        table_[idx(b.slot(), a.slot())] = -value;
    }

    const RingElement* entry(int slot_a, int slot_b) const {
        const auto& e = table_[idx(slot_a, slot_b)];
        return e && !e->is_zero() ? &*e : nullptr;
    }

    RingElement generator_bracket(Generator a, Generator b) const {
        const auto* e = entry(a.slot(), b.slot());
        return e ? *e : RingElement{};
    }

    /// Throws if `f` mentions a field generator that is not part of this structure.
    void require_known(const RingElement& f) const {
        for (Generator g : f.support())
            if (!knows(g)) throw StructuralError("unknown generator " + g.name() + " in bracket");
    }

    void require_known(const Fraction& f) const {
        require_known(f.num());
        for (const auto& [fac, e] : f.den()) require_known(fac);
    }

    /// Slots that take part in at least one nonzero bracket.
    std::vector<int> active_slots() const {
        std::vector<int> out;
        for (int s = 0; s < kSlots; ++s)
            for (int t = 0; t < kSlots; ++t)
                if (entry(s, t)) {
                    out.push_back(s);
                    break;
                }
        return out;
    }

private:
    static std::size_t idx(int a, int b) { return static_cast<std::size_t>(a * kSlots + b); }

    std::array<std::optional<RingElement>, kSlots * kSlots> table_{};
    std::array<bool, kSlots> known_{};
};

/// Poisson bracket of ring elements.
inline RingElement bracket(const RingElement& f, const RingElement& g, const PoissonStructure& ps) {
    ps.require_known(f);
    ps.require_known(g);
    std::vector<RingElement::Term> out;
    std::vector<int> fa, gb;
    for (const auto& [mf, cf] : f.terms()) {
        fa.clear();
        for (int s = kSlotE; s < kSlots; ++s)
            if (mf[s] != 0) fa.push_back(s);
        if (fa.empty()) continue;
        for (const auto& [mg, cg] : g.terms()) {
            gb.clear();
            for (int s = kSlotE; s < kSlots; ++s)
                if (mg[s] != 0) gb.push_back(s);
            if (gb.empty()) continue;
            Monomial prod;
            bool prod_ready = false;
            for (int a : fa)
                for (int b : gb) {
                    const RingElement* e = ps.entry(a, b);
                    if (!e) continue;
                    if (!prod_ready) {
                        prod = mf * mg;
                        prod_ready = true;
                    }
                    Monomial base = prod;
                    base.add(a, -1);
                    base.add(b, -1);
                    Rational c = cf * cg * mf[a] * mg[b];
                    for (const auto& [me, ce] : e->terms()) out.emplace_back(base * me, c * ce);
                }
        }
    }
    return RingElement::from_terms(std::move(out));
}

/// Poisson bracket on the field of fractions, via the quotient rule applied
/// generator by generator.
inline Fraction bracket(const Fraction& f, const Fraction& g, const PoissonStructure& ps) {
    ps.require_known(f);
    ps.require_known(g);
    if (f.is_polynomial() && g.is_polynomial()) return Fraction(bracket(f.num(), g.num(), ps));
    Fraction out;
    std::array<std::optional<Fraction>, kSlots> df{}, dg{};
    auto d = [](std::array<std::optional<Fraction>, kSlots>& cache, const Fraction& h, int s) -> const Fraction& {
        auto& c = cache[static_cast<std::size_t>(s)];
        if (!c) c = h.derivative(Generator::from_slot(s));
        return *c;
    };
    for (int a : ps.active_slots()) {
        Generator ga = Generator::from_slot(a);
        if (!f.contains(ga)) continue;
        for (int b : ps.active_slots()) {
            const RingElement* e = ps.entry(a, b);
            if (!e) continue;
            Generator gb = Generator::from_slot(b);
            if (!g.contains(gb)) continue;
            const Fraction& fa = d(df, f, a);
            if (fa.is_zero()) break;
            const Fraction& gbd = d(dg, g, b);
            if (gbd.is_zero()) continue;
            out = out + fa * gbd * Fraction(*e);
        }
    }
    return out;
}

/// Alias with the name used for the field-of-fractions layer.
inline Fraction bracket_fraction(const Fraction& f, const Fraction& g, const PoissonStructure& ps) {
    return bracket(f, g, ps);
}

/// The sl(2) Casimir H^2 + E F.
inline RingElement casimir(const PoissonStructure& ps) {
    if (!ps.has_sl2()) throw StructuralError("casimir requires sl(2) generators");
    RingElement h = gen(Generator::H());
    return h * h + gen(Generator::E()) * gen(Generator::F());
}

}  // namespace bilax
