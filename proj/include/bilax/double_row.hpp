#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bilax/structure_checks.hpp"

namespace bilax {

/// Bulk Lax family, boundary matrices and the Poisson structure they live in.
/// All matrices are functions of lambda; r is a function of z.
struct BoundaryModel {
    int sites = 0;
    LaxFamily lax;
    SpectralMatrix k_minus;
    SpectralMatrix k_plus;
    SpectralMatrix r;
    PoissonStructure ps;
};

/// Power series coefficients of a generating function in `var`.
struct TransferExpansion {
    Generator var = kLambda;
    Fraction generating;
    std::map<int, Fraction> coefficients;

    static TransferExpansion of(const Fraction& f, Generator var = kLambda) {
        if (!f.is_polynomial()) throw StructuralError("transfer generating function must be polynomial in the spectral variable");
        TransferExpansion e{var, f, {}};
        for (auto& [p, c] : f.num().coefficients(var)) e.coefficients.emplace(p, Fraction(std::move(c)));
        return e;
    }

    int degree() const { return coefficients.empty() ? 0 : coefficients.rbegin()->first; }

    /// Coefficient of var^power; zero inside the stored range, error outside it.
    Fraction coefficient(int power) const {
        if (coefficients.empty() || power < 0 || power > degree())
            throw StructuralError("expansion has no coefficient at power " + std::to_string(power));
        auto it = coefficients.find(power);
        return it == coefficients.end() ? Fraction{} : it->second;
    }
};

/// How a Hamiltonian is read off a transfer expansion.
struct HamiltonianRecipe {
    enum class Kind { ScaledCoefficient, Ratio };
    Kind kind = Kind::ScaledCoefficient;
    int power = 0;        // numerator power (or the single power)
    int denominator = 0;  // ratio only
    Rational scalar{1};

    static HamiltonianRecipe scaled_coefficient(int power, Rational s) {
        return {Kind::ScaledCoefficient, power, 0, std::move(s)};
    }
    static HamiltonianRecipe ratio(int num_power, int den_power, Rational s) {
        return {Kind::Ratio, num_power, den_power, std::move(s)};
    }

    std::string describe() const {
        if (kind == Kind::ScaledCoefficient)
            return scalar.get_str() + " * coeff(lambda^" + std::to_string(power) + ")";
        return scalar.get_str() + " * coeff(lambda^" + std::to_string(power) + ") / coeff(lambda^" +
               std::to_string(denominator) + ")";
    }
};

inline Fraction extract_hamiltonian(const TransferExpansion& exp, const HamiltonianRecipe& recipe) {
    if (recipe.kind == HamiltonianRecipe::Kind::ScaledCoefficient)
        return exp.coefficient(recipe.power).scaled(recipe.scalar);
    Fraction den = exp.coefficient(recipe.denominator);
    if (den.is_zero()) throw StructuralError("ratio recipe: denominator coefficient vanishes");
    return (exp.coefficient(recipe.power) / den).scaled(recipe.scalar);
}

/// L(n, m, lambda) = ell(n) ell(n-1) ... ell(m), with L(m-1, m) = 1.
inline SpectralMatrix monodromy(const LaxFamily& lax, int sites, int n, int m) {
    if (m < 1 || n > sites || n < m - 1) throw StructuralError("monodromy site range out of bounds");
    SpectralMatrix out = SpectralMatrix::identity(2);
    for (int j = n; j >= m; --j) out = out * lax(j);
    return out;
}

/// Lax data of one model with per-site matrices cached. Built once, then
/// only read, so a single instance can be shared between threads.
class DoubleRow {
public:
    explicit DoubleRow(BoundaryModel model) : model_(std::move(model)) {
        if (model_.sites < 1) throw StructuralError("model needs at least one site");
        const int n = model_.sites;
        ell_.reserve(static_cast<std::size_t>(n));
        ell_neg_inv_.reserve(static_cast<std::size_t>(n));
        for (int j = 1; j <= n; ++j) {
            ell_.push_back(model_.lax(j));
            ell_neg_inv_.push_back(inverse_2x2(ell_.back().negate_variable(kLambda)));
        }
        transfer_ = compute_transfer();
        expansion_ = TransferExpansion::of(transfer_);
    }

    const BoundaryModel& model() const { return model_; }
    int sites() const { return model_.sites; }
    const PoissonStructure& ps() const { return model_.ps; }

    /// ell(j, lambda).
    const SpectralMatrix& ell(int j) const { return ell_.at(static_cast<std::size_t>(j - 1)); }
    SpectralMatrix ell_mu(int j) const { return rename_spectral(ell(j), kLambda, kMu); }
    SpectralMatrix k_minus_mu() const { return rename_spectral(model_.k_minus, kLambda, kMu); }
    SpectralMatrix k_plus_mu() const { return rename_spectral(model_.k_plus, kLambda, kMu); }

    /// L(n, m, lambda).
    SpectralMatrix partial(int n, int m) const {
        check_range(n, m);
        SpectralMatrix out = SpectralMatrix::identity(2);
        for (int j = n; j >= m; --j) out = out * ell(j);
        return out;
    }

    /// L(n, m, -lambda)^{-1} = ell(m,-lambda)^{-1} ... ell(n,-lambda)^{-1}.
    SpectralMatrix partial_neg_inverse(int n, int m) const {
        check_range(n, m);
        SpectralMatrix out = SpectralMatrix::identity(2);
        for (int j = m; j <= n; ++j) out = out * ell_neg_inv_.at(static_cast<std::size_t>(j - 1));
        return out;
    }

    /// b(lambda) = tr(k+(lambda) L(lambda) k-(lambda) L(-lambda)^{-1}).
    const Fraction& transfer() const { return transfer_; }
    const TransferExpansion& expansion() const { return expansion_; }

    /// Boundary time-part generating matrix, a function of (lambda, mu):
    ///   tr_a(k+_a L_a(N,j) r_ab(lambda-mu) L_a(j-1,1) k-_a L_a(-lambda)^{-1})
    /// + tr_a(k+_a L_a k-_a L_a(j-1,1,-lambda)^{-1} r_ba(lambda+mu) L_a(N,j,-lambda)^{-1})
    SpectralMatrix boundary_M(int j) const {
        const int n = model_.sites;
        if (j < 1 || j > n + 1) throw StructuralError("boundary_M index out of range");
        RingElement lam = gen(kLambda), mu = gen(kMu);
        SpectralMatrix left1 = model_.k_plus * partial(n, j);
        SpectralMatrix right1 = partial(j - 1, 1) * model_.k_minus * partial_neg_inverse(n, 1);
        SpectralMatrix t1 = partial_trace_a(embed_a(left1) * r_at(model_.r, lam - mu) * embed_a(right1));
        SpectralMatrix left2 = model_.k_plus * partial(n, 1) * model_.k_minus * partial_neg_inverse(j - 1, 1);
        SpectralMatrix right2 = partial_neg_inverse(n, j);
        SpectralMatrix t2 = partial_trace_a(embed_a(left2) * r_ba_at(model_.r, lam + mu) * embed_a(right2));
        return t1 + t2;
    }

    std::vector<SpectralMatrix> boundary_M_all() const {
        std::vector<SpectralMatrix> out;
        for (int j = 1; j <= model_.sites + 1; ++j) out.push_back(boundary_M(j));
        return out;
    }

private:
    void check_range(int n, int m) const {
        if (m < 1 || n > model_.sites || n < m - 1) throw StructuralError("monodromy site range out of bounds");
    }

    Fraction compute_transfer() const {
        const int n = model_.sites;
        return (model_.k_plus * partial(n, 1) * model_.k_minus * partial_neg_inverse(n, 1)).trace();
    }

    BoundaryModel model_;
    std::vector<SpectralMatrix> ell_;
    std::vector<SpectralMatrix> ell_neg_inv_;
    Fraction transfer_;
    TransferExpansion expansion_;
};

/// t(lambda) = tr L(lambda).
inline TransferExpansion single_row_transfer(const LaxFamily& lax, int sites) {
    return TransferExpansion::of(monodromy(lax, sites, sites, 1).trace());
}

inline TransferExpansion double_row_transfer(const DoubleRow& dr) { return dr.expansion(); }

/// M_b(j, lambda, mu) = tr_a(L_a(N,j,lambda) r_ab(lambda-mu) L_a(j-1,1,lambda)).
inline SpectralMatrix sts_matrix(const LaxFamily& lax, const SpectralMatrix& r, int sites, int j) {
    if (j < 1 || j > sites + 1) throw StructuralError("sts_matrix index out of range");
    SpectralMatrix left = monodromy(lax, sites, sites, j);
    SpectralMatrix right = monodromy(lax, sites, j - 1, 1);
    return partial_trace_a(embed_a(left) * r_at(r, gen(kLambda) - gen(kMu)) * embed_a(right));
}

/// {t(lambda), ell(j,mu)} = M(j+1) ell(j,mu) - ell(j,mu) M(j) for every site.
inline RelationReport check_single_row_zero_curvature(const LaxFamily& lax, const SpectralMatrix& r,
                                                      const PoissonStructure& ps, int sites) {
    RelationReport rep{"single_row_zero_curvature", true, {}};
    Fraction t = monodromy(lax, sites, sites, 1).trace();
    std::vector<SpectralMatrix> m;
    for (int j = 1; j <= sites + 1; ++j) m.push_back(sts_matrix(lax, r, sites, j));
    for (int j = 1; j <= sites; ++j) {
        SpectralMatrix l = rename_spectral(lax(j), kLambda, kMu);
        SpectralMatrix lhs = scalar_bracket(t, l, ps);
        SpectralMatrix rhs = m[static_cast<std::size_t>(j)] * l - l * m[static_cast<std::size_t>(j - 1)];
        rep.absorb(lhs - rhs, "j=" + std::to_string(j) + " ");
    }
    return rep;
}

inline RelationReport check_single_row_commuting(const LaxFamily& lax, const PoissonStructure& ps, int sites) {
    Fraction t = monodromy(lax, sites, sites, 1).trace();
    Fraction t_mu = t.substitute(kLambda, Fraction(gen(kMu)));
    RelationReport rep{"single_row_commuting", true, {}};
    Fraction br = bracket(t, t_mu, ps);
    if (!br.is_zero()) rep.absorb(SpectralMatrix{{br, 0}, {0, 0}});
    return rep;
}

/// {b(lambda), b(mu)} = 0.
inline RelationReport check_transfer_commuting(const DoubleRow& dr) {
    RelationReport rep{"transfer_commuting", true, {}};
    Fraction b_mu = dr.transfer().substitute(kLambda, Fraction(gen(kMu)));
    Fraction br = bracket(dr.transfer(), b_mu, dr.ps());
    if (!br.is_zero()) rep.absorb(SpectralMatrix{{br, 0}, {0, 0}});
    return rep;
}

/// The three generating-function identities linking b(lambda) to the
/// boundary M matrices: bulk sites, k^- and k^+.
inline std::vector<RelationReport> check_theorem(const DoubleRow& dr,
                                                 const std::vector<SpectralMatrix>* precomputed_m = nullptr) {
    const int n = dr.sites();
    std::vector<SpectralMatrix> m = precomputed_m ? *precomputed_m : dr.boundary_M_all();
    auto M = [&](int j) -> const SpectralMatrix& { return m.at(static_cast<std::size_t>(j - 1)); };
    const Fraction& b = dr.transfer();

    RelationReport bulk{"theorem_bulk", true, {}};
    for (int j = 1; j <= n; ++j) {
        SpectralMatrix l = dr.ell_mu(j);
        SpectralMatrix lhs = scalar_bracket(b, l, dr.ps());
        bulk.absorb(lhs - (M(j + 1) * l - l * M(j)), "j=" + std::to_string(j) + " ");
    }

    RelationReport kminus{"theorem_k_minus", true, {}};
    {
        SpectralMatrix k = dr.k_minus_mu();
        SpectralMatrix lhs = scalar_bracket(b, k, dr.ps());
        kminus.absorb(lhs - (M(1) * k - k * M(1).negate_variable(kMu)));
    }

    RelationReport kplus{"theorem_k_plus", true, {}};
    {
        SpectralMatrix k = dr.k_plus_mu();
        SpectralMatrix lhs = scalar_bracket(b, k, dr.ps());
        kplus.absorb(lhs - (M(n + 1).negate_variable(kMu) * k - k * M(n + 1)));
    }
    return {bulk, kminus, kplus};
}

/// Coefficient matrices M^{(k)}(j, mu) of the large-lambda expansion of a
/// generating matrix, for k >= lowest.
inline std::map<int, SpectralMatrix> expand_matrix(const SpectralMatrix& m, int lowest) {
    std::map<int, SpectralMatrix> out;
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j)
            for (auto& [k, c] : expand_at_infinity(m(i, j), kLambda, lowest)) {
                auto it = out.try_emplace(k, SpectralMatrix(m.dim())).first;
                it->second(i, j) = c;
            }
    return out;
}

/// Time-part matrix M_H(j, mu) for the Hamiltonian built by `recipe`, from
/// the generating matrix M(j, lambda, mu).
inline SpectralMatrix extract_M(const SpectralMatrix& generating, const TransferExpansion& exp,
                                const HamiltonianRecipe& recipe) {
    int lowest = recipe.kind == HamiltonianRecipe::Kind::Ratio ? std::min(recipe.power, recipe.denominator)
                                                               : recipe.power;
    auto coeffs = expand_matrix(generating, lowest);
    auto at = [&](int k) {
        auto it = coeffs.find(k);
        return it == coeffs.end() ? SpectralMatrix(generating.dim()) : it->second;
    };
    if (recipe.kind == HamiltonianRecipe::Kind::ScaledCoefficient)
        return Fraction(recipe.scalar) * at(recipe.power);
    Fraction h_num = exp.coefficient(recipe.power);
    Fraction h_den = exp.coefficient(recipe.denominator);
    if (h_den.is_zero()) throw StructuralError("ratio recipe: denominator coefficient vanishes");
    Fraction inv_sq = h_den.pow(-2).scaled(recipe.scalar);
    return inv_sq * (h_den * at(recipe.power) - h_num * at(recipe.denominator));
}

/// Hamiltonian and its time-part matrices M(j, mu), j = 1..N+1.
struct LaxPair {
    Fraction hamiltonian;
    std::vector<SpectralMatrix> m;  // index j-1
};

inline LaxPair derive_lax_pair(const DoubleRow& dr, const HamiltonianRecipe& recipe,
                               const std::vector<SpectralMatrix>* precomputed_m = nullptr) {
    std::vector<SpectralMatrix> gen_m = precomputed_m ? *precomputed_m : dr.boundary_M_all();
    LaxPair out{extract_hamiltonian(dr.expansion(), recipe), {}};
    for (const auto& g : gen_m) out.m.push_back(extract_M(g, dr.expansion(), recipe));
    return out;
}

/// Zero-curvature form of the Hamiltonian flow:
///   {H, ell(j,mu)} = M(j+1,mu) ell(j,mu) - ell(j,mu) M(j,mu),
///   {H, k^-(mu)}   = M(1,mu) k^-(mu) - k^-(mu) M(1,-mu),
///   {H, k^+(mu)}   = M(N+1,-mu) k^+(mu) - k^+(mu) M(N+1,mu).
inline std::vector<RelationReport> verify_corollary(const DoubleRow& dr, const LaxPair& pair) {
    const int n = dr.sites();
    auto M = [&](int j) -> const SpectralMatrix& { return pair.m.at(static_cast<std::size_t>(j - 1)); };
    const PoissonStructure& ps = dr.ps();

    RelationReport bulk{"corollary_bulk", true, {}};
    for (int j = 1; j <= n; ++j) {
        SpectralMatrix l = dr.ell_mu(j);
        bulk.absorb(scalar_bracket(pair.hamiltonian, l, ps) - (M(j + 1) * l - l * M(j)), "j=" + std::to_string(j) + " ");
    }
    RelationReport kminus{"corollary_k_minus", true, {}};
    {
        SpectralMatrix k = dr.k_minus_mu();
        kminus.absorb(scalar_bracket(pair.hamiltonian, k, ps) - (M(1) * k - k * M(1).negate_variable(kMu)));
    }
    RelationReport kplus{"corollary_k_plus", true, {}};
    {
        SpectralMatrix k = dr.k_plus_mu();
        kplus.absorb(scalar_bracket(pair.hamiltonian, k, ps) - (M(n + 1).negate_variable(kMu) * k - k * M(n + 1)));
    }
    return {bulk, kminus, kplus};
}

inline std::vector<RelationReport> verify_corollary(const DoubleRow& dr, const HamiltonianRecipe& recipe) {
    return verify_corollary(dr, derive_lax_pair(dr, recipe));
}

/// {H, H^{(k)}} = 0 for every expansion coefficient.
inline RelationReport check_in_involution(const DoubleRow& dr, const Fraction& hamiltonian) {
    RelationReport rep{"in_involution", true, {}};
    for (const auto& [k, c] : dr.expansion().coefficients) {
        Fraction br = bracket(hamiltonian, c, dr.ps());
        if (!br.is_zero()) {
            rep.holds = false;
            rep.residual.push_back({"H^(" + std::to_string(k) + ")", br});
        }
    }
    return rep;
}

/// Non-dynamical boundary relations M(1,mu) k^-(mu) = k^-(mu) M(1,-mu) and
/// M(N+1,-mu) k^+(mu) = k^+(mu) M(N+1,mu), meaningful when k^+- are constant.
inline RelationReport check_km_intertwining(const DoubleRow& dr, const LaxPair& pair) {
    const int n = dr.sites();
    const SpectralMatrix& m1 = pair.m.front();
    const SpectralMatrix& mn = pair.m.at(static_cast<std::size_t>(n));
    SpectralMatrix km = dr.k_minus_mu(), kp = dr.k_plus_mu();
    RelationReport rep{"km_intertwining", true, {}};
    rep.absorb(m1 * km - km * m1.negate_variable(kMu), "k- ");
    rep.absorb(mn.negate_variable(kMu) * kp - kp * mn, "k+ ");
    return rep;
}

}  // namespace bilax
