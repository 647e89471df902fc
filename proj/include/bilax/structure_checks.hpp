#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bilax/spectral_matrix.hpp"

namespace bilax {

/// ell(j, lambda) for a site j (1-based), as a matrix in the variable lambda.
using LaxFamily = std::function<SpectralMatrix(int site)>;

struct ResidualEntry {
    std::string where;  // e.g. "(1,2),(1,1)" or "j=2 (0,1)"
    Fraction value;
};

/// Outcome of an exact relation check. `holds` iff `residual` is empty.
struct RelationReport {
    std::string relation;
    bool holds = true;
    std::vector<ResidualEntry> residual;

    void absorb(const SpectralMatrix& diff, const std::string& prefix = {}) {
        for (int i = 0; i < diff.dim(); ++i)
            for (int j = 0; j < diff.dim(); ++j) {
                if (diff(i, j).is_zero()) continue;
                residual.push_back({prefix + index_label(diff.dim(), i, j), diff(i, j).reduced()});
                holds = false;
            }
    }

    void absorb(const RelationReport& other) {
        for (const auto& r : other.residual) residual.push_back({other.relation + ": " + r.where, r.value});
        holds = holds && other.holds;
    }

    static std::string index_label(int dim, int i, int j) {
        auto legs = [dim](int idx) {
            std::string s;
            for (int bit = dim / 2; bit >= 1; bit /= 2) {
                if (!s.empty()) s += ",";
                s += std::to_string(((idx / bit) % 2) + 1);
            }
            return s;
        };
        if (dim == 2) return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
        return "((" + legs(i) + "),(" + legs(j) + "))";
    }
};

inline SpectralMatrix rename_spectral(const SpectralMatrix& m, Generator from, Generator to) {
    return m.substitute(from, Fraction(gen(to)));
}

inline SpectralMatrix commutator(const SpectralMatrix& a, const SpectralMatrix& b) { return a * b - b * a; }

/// [r_ac(lambda-nu), r_bc(mu-nu)] + [r_ab(lambda-mu), r_ac(lambda-nu)] + [r_ab(lambda-mu), r_bc(mu-nu)] = 0
/// for r given as a 4x4 matrix in the formal variable z.
inline RelationReport check_cybe(const SpectralMatrix& r) {
    RingElement l = gen(kLambda), m = gen(kMu), n = gen(kNu);
    SpectralMatrix r_ac = embed_legs(r_at(r, l - n), 0, 2);
    SpectralMatrix r_bc = embed_legs(r_at(r, m - n), 1, 2);
    SpectralMatrix r_ab = embed_legs(r_at(r, l - m), 0, 1);
    SpectralMatrix total = commutator(r_ac, r_bc) + commutator(r_ab, r_ac) + commutator(r_ab, r_bc);
    RelationReport rep{"cybe", true, {}};
    rep.absorb(total);
    return rep;
}

/// {ell_a(j,lambda), ell_b(j,mu)} = [r_ab(lambda-mu), ell_a(j,lambda) ell_b(j,mu)] at `site`,
/// plus vanishing of {ell_a(site), ell_b(other_site)} when other_site > 0.
inline RelationReport check_rll(const LaxFamily& lax, const SpectralMatrix& r, const PoissonStructure& ps,
                                int site = 1, int other_site = 0) {
    RelationReport rep{"rll", true, {}};
    SpectralMatrix l_lam = lax(site);
    SpectralMatrix l_mu = rename_spectral(l_lam, kLambda, kMu);
    SpectralMatrix lhs = tensor_bracket(l_lam, l_mu, ps);
    SpectralMatrix prod = embed_a(l_lam) * embed_b(l_mu);
    SpectralMatrix rmat = r_at(r, gen(kLambda) - gen(kMu));
    rep.absorb(lhs - commutator(rmat, prod), "same-site ");
    if (other_site > 0 && other_site != site) {
        SpectralMatrix other = rename_spectral(lax(other_site), kLambda, kMu);
        rep.absorb(tensor_bracket(l_lam, other, ps), "off-site ");
    }
    return rep;
}

namespace detail {

inline SpectralMatrix reflection_residual(const SpectralMatrix& k, const SpectralMatrix& r, const PoissonStructure& ps,
                                          bool minus) {
    SpectralMatrix k_lam = k;
    SpectralMatrix k_mu = rename_spectral(k, kLambda, kMu);
    SpectralMatrix ka = embed_a(k_lam);
    SpectralMatrix kb = embed_b(k_mu);
    RingElement diff = gen(kLambda) - gen(kMu);
    RingElement sum = gen(kLambda) + gen(kMu);
    SpectralMatrix r_ab_d = r_at(r, diff), r_ba_d = r_ba_at(r, diff);
    SpectralMatrix r_ab_s = r_at(r, sum), r_ba_s = r_ba_at(r, sum);
    SpectralMatrix rhs = minus ? r_ab_d * ka * kb - ka * kb * r_ba_d + ka * r_ba_s * kb - kb * r_ab_s * ka
                               : r_ba_d * ka * kb - ka * kb * r_ab_d + ka * r_ab_s * kb - kb * r_ba_s * ka;
    return tensor_bracket(k_lam, k_mu, ps) - rhs;
}

}  // namespace detail

/// Dynamical reflection algebra for k^-(lambda).
inline RelationReport check_reflection_minus(const SpectralMatrix& k, const SpectralMatrix& r,
                                             const PoissonStructure& ps) {
    RelationReport rep{"reflection_minus", true, {}};
    rep.absorb(detail::reflection_residual(k, r, ps, true));
    return rep;
}

/// Dynamical reflection algebra for k^+(lambda).
inline RelationReport check_reflection_plus(const SpectralMatrix& k, const SpectralMatrix& r,
                                            const PoissonStructure& ps) {
    RelationReport rep{"reflection_plus", true, {}};
    rep.absorb(detail::reflection_residual(k, r, ps, false));
    return rep;
}

/// {k(lambda), k(mu)} = 0 because no entry carries a dynamical generator.
/// Residual lists the entries that do.
inline RelationReport check_nondynamical(const SpectralMatrix& k) {
    RelationReport rep{"nondynamical", true, {}};
    for (int i = 0; i < k.dim(); ++i)
        for (int j = 0; j < k.dim(); ++j)
            if (!k(i, j).is_field_free()) {
                rep.holds = false;
                rep.residual.push_back({RelationReport::index_label(k.dim(), i, j), k(i, j)});
            }
    return rep;
}

/// {A_a(lambda), B_b(mu)} = 0, used for the locality conditions between
/// boundary and bulk matrices.
inline RelationReport check_locality(const std::string& name, const SpectralMatrix& a, const SpectralMatrix& b,
                                     const PoissonStructure& ps) {
    RelationReport rep{name, true, {}};
    rep.absorb(tensor_bracket(a, rename_spectral(b, kLambda, kMu), ps));
    return rep;
}

}  // namespace bilax
