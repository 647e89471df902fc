#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "bilax/toda_models.hpp"

namespace bilax {

/// Raised when a denominator falls below the guard threshold.
class SingularityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kSingularityThreshold = 1e-12;

/// Numeric value of every slot. u_j slots hold e^{x_j}.
using SlotValues = std::array<double, kSlots>;

/// Polynomial compiled to (coefficient, sparse exponent list) pairs.
class CompiledPolynomial {
public:
    CompiledPolynomial() = default;
    explicit CompiledPolynomial(const RingElement& p) {
        for (const auto& [m, c] : p.terms()) {
            Term t;
            t.coeff = c.get_d();
            for (int s = 0; s < kSlots; ++s)
                if (m[s] != 0) t.factors.push_back({static_cast<std::int16_t>(s), static_cast<std::int16_t>(m[s])});
            terms_.push_back(std::move(t));
        }
    }

    double operator()(const SlotValues& v) const {
        double sum = 0;
        for (const auto& t : terms_) {
            double prod = t.coeff;
            for (const auto& [s, e] : t.factors) prod *= ipow(v[static_cast<std::size_t>(s)], e);
            sum += prod;
        }
        return sum;
    }

private:
    struct Term {
        double coeff = 0;
        std::vector<std::pair<std::int16_t, std::int16_t>> factors;
    };

    static double ipow(double x, int e) {
        if (e < 0) return 1.0 / ipow(x, -e);
        double r = 1;
        while (e--) r *= x;
        return r;
    }

    std::vector<Term> terms_;
};

/// Fraction compiled for repeated floating evaluation.
class CompiledFraction {
public:
    CompiledFraction() = default;
    explicit CompiledFraction(const Fraction& f) : num_(f.num()) {
        for (const auto& [p, e] : f.den()) den_.emplace_back(CompiledPolynomial(p), e);
    }

    double operator()(const SlotValues& v) const {
        double d = 1;
        for (const auto& [p, e] : den_) {
            double val = p(v);
            if (std::abs(val) < kSingularityThreshold) throw SingularityError("denominator below 1e-12");
            for (int i = 0; i < e; ++i) d *= val;
        }
        return num_(v) / d;
    }

private:
    CompiledPolynomial num_;
    std::vector<std::pair<CompiledPolynomial, int>> den_;
};

inline double evaluate(const Fraction& f, const SlotValues& v) { return CompiledFraction(f)(v); }

/// State of the chain: x_1..x_N, X_1..X_N[, E, F, H].
struct PhasePoint {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
};

/// Slot layout with every parameter numeric. Unassigned parameters are zero.
inline SlotValues base_slots(const ModelSpec& m) {
    SlotValues v{};
    for (const auto& [p, q] : m.params) v[static_cast<std::size_t>(Generator::param(p).slot())] = q.get_d();
    return v;
}

inline void load_state(const ModelSpec& m, const PhasePoint& p, SlotValues& v) {
    const auto gens = m.phase_generators();
    for (std::size_t i = 0; i < gens.size(); ++i) {
        double x = p[i];
        v[static_cast<std::size_t>(gens[i].slot())] = gens[i].kind == Kind::Coordinate ? std::exp(x) : x;
    }
}

inline std::vector<std::string> state_labels(const ModelSpec& m) {
    std::vector<std::string> out;
    for (int j = 1; j <= m.sites; ++j) out.push_back("x_" + std::to_string(j));
    for (int j = 1; j <= m.sites; ++j) out.push_back("X_" + std::to_string(j));
    if (m.family == ModelFamily::DN) out.insert(out.end(), {"E", "F", "H"});
    return out;
}

enum class FieldSource { Bracket, ClosedForm };

/// Compiled d/dT on phase points; u-rates are already xdot.
class VectorField {
public:
    VectorField(const ModelSpec& m, const EquationsOfMotion& eom) : model_(m), base_(base_slots(m)) {
        for (Generator g : m.phase_generators()) rates_.emplace_back(eom.of(g));
    }

    const ModelSpec& model() const { return model_; }
    const SlotValues& base() const { return base_; }

    SlotValues slots(const PhasePoint& p) const {
        SlotValues v = base_;
        load_state(model_, p, v);
        return v;
    }

    PhasePoint operator()(const PhasePoint& p) const { return rate_at(slots(p)); }

    PhasePoint rate_at(const SlotValues& v) const {
        PhasePoint out{std::vector<double>(rates_.size())};
        for (std::size_t i = 0; i < rates_.size(); ++i) out[i] = rates_[i](v);
        return out;
    }

private:
    ModelSpec model_;
    SlotValues base_;
    std::vector<CompiledFraction> rates_;
};

inline VectorField vector_field(const ModelSpec& m, const Fraction& hamiltonian, FieldSource source) {
    return VectorField(m, source == FieldSource::ClosedForm ? paper_eom(m) : eom_from_bracket(m, hamiltonian));
}

enum class Scheme { RK4, RK4Adaptive };

struct Trajectory {
    std::vector<double> times;
    std::vector<PhasePoint> states;
    std::map<std::string, std::vector<double>> channels;
    bool truncated = false;
    std::string error;
};

namespace detail {

inline PhasePoint axpy(const PhasePoint& x, double a, const PhasePoint& y) {
    PhasePoint r = x;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += a * y[i];
    return r;
}

inline PhasePoint rk4_step(const VectorField& f, const PhasePoint& p, double dt) {
    PhasePoint k1 = f(p);
    PhasePoint k2 = f(axpy(p, dt / 2, k1));
    PhasePoint k3 = f(axpy(p, dt / 2, k2));
    PhasePoint k4 = f(axpy(p, dt, k3));
    PhasePoint r = p;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += dt / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    return r;
}

}  // namespace detail

/// Fixed-step RK4 samples every step. RK4Adaptive uses step doubling with
/// local tolerance `tol` and still reports on the fixed dt grid.
inline Trajectory integrate(const VectorField& f, const PhasePoint& p0, double dt, int steps,
                            Scheme scheme = Scheme::RK4, double tol = 1e-12) {
    if (!(dt > 0)) throw std::invalid_argument("dt must be positive");
    if (steps < 0) throw std::invalid_argument("steps must be non-negative");
    Trajectory tr;
    tr.times.push_back(0);
    tr.states.push_back(p0);
    PhasePoint p = p0;
    try {
        f(p);
        for (int s = 1; s <= steps; ++s) {
            if (scheme == Scheme::RK4) {
                p = detail::rk4_step(f, p, dt);
            } else {
                double t = 0, h = dt;
                while (t < dt) {
                    h = std::min(h, dt - t);
                    PhasePoint big = detail::rk4_step(f, p, h);
                    PhasePoint half = detail::rk4_step(f, detail::rk4_step(f, p, h / 2), h / 2);
                    double err = 0;
                    for (std::size_t i = 0; i < p.size(); ++i) err = std::max(err, std::abs(big[i] - half[i]));
                    if (err <= tol || h < 1e-10) {
                        for (std::size_t i = 0; i < p.size(); ++i) p[i] = half[i] + (half[i] - big[i]) / 15;
                        t += h;
                        if (err < tol / 64) h *= 2;
                    } else {
                        h /= 2;
                    }
                }
            }
            for (double x : p.values)
                if (!std::isfinite(x)) throw SingularityError("non-finite state");
            f(p);
            tr.times.push_back(s * dt);
            tr.states.push_back(p);
        }
    } catch (const SingularityError& e) {
        tr.truncated = true;
        tr.error = e.what();
    }
    return tr;
}

/// |h - h0| / max(|h0|, 1).
inline double relative_drift(double h, double h0) { return std::abs(h - h0) / std::max(std::abs(h0), 1.0); }

/// Exact data needed for numeric diagnostics of a model.
struct DiagnosticData {
    ModelSpec model;
    Fraction hamiltonian;
    std::vector<SpectralMatrix> m;  // M(j, mu), j = 1..N+1
    std::map<int, Fraction> conserved;
};

inline DiagnosticData diagnostic_data(const ModelSpec& model) {
    DoubleRow dr(model.boundary);
    LaxPair pair = derive_lax_pair(dr, model.recipe);
    return {model, pair.hamiltonian, pair.m, dr.expansion().coefficients};
}

/// Pointwise zero-curvature checker at fixed numeric mu values:
///   d ell(j)/dT - (M(j+1) ell(j) - ell(j) M(j)),
///   d k^-/dT - (M(1,mu) k^- - k^- M(1,-mu)),
///   d k^+/dT - (M(N+1,-mu) k^+ - k^+ M(N+1,mu)).
/// Time derivatives come from the exact vector field via the chain rule.
class ZeroCurvatureProbe {
public:
    ZeroCurvatureProbe(const DiagnosticData& d, std::vector<double> mus) : mus_(std::move(mus)) {
        const ModelSpec& m = d.model;
        gens_ = m.phase_generators();
        auto compile = [&](const SpectralMatrix& s) {
            std::array<CompiledFraction, 4> out;
            for (int i = 0; i < 4; ++i) out[static_cast<std::size_t>(i)] = CompiledFraction(s(i / 2, i % 2));
            return out;
        };
        auto partials = [&](const SpectralMatrix& s) {
            std::vector<std::array<CompiledFraction, 4>> out;
            for (Generator g : gens_) {
                SpectralMatrix ds = s.map([&](const Fraction& f) { return f.derivative(g); });
                // d/dT u_j = u_j xdot_j, and rates for u slots hold xdot_j.
                if (g.kind == Kind::Coordinate) ds = Fraction(u(g.index)) * ds;
                out.push_back(compile(ds));
            }
            return out;
        };
        for (int j = 1; j <= m.sites; ++j) {
            SpectralMatrix l = rename_spectral(toda_lax(j), kLambda, kMu);
            ell_.push_back(compile(l));
            ell_d_.push_back(partials(l));
        }
        for (const auto& mm : d.m) {
            m_pos_.push_back(compile(mm));
            m_neg_.push_back(compile(mm.negate_variable(kMu)));
        }
        SpectralMatrix km = rename_spectral(m.boundary.k_minus, kLambda, kMu);
        SpectralMatrix kp = rename_spectral(m.boundary.k_plus, kLambda, kMu);
        k_minus_ = compile(km);
        k_plus_ = compile(kp);
        k_minus_d_ = partials(km);
        k_plus_d_ = partials(kp);
    }

    /// Absolute Frobenius norms, and the same divided by
    /// max(1, |d/dT|, |first product| + |second product|).
    struct Residual {
        double bulk = 0;
        double boundary = 0;
        double bulk_relative = 0;
        double boundary_relative = 0;
    };

    /// Max over sites and mu samples.
    Residual operator()(SlotValues v, const PhasePoint& rate) const {
        Residual r;
        for (double mu : mus_) {
            v[static_cast<std::size_t>(kMu.slot())] = mu;
            const std::size_t n = ell_.size();
            std::vector<Mat> mp, mn;
            for (std::size_t j = 0; j <= n; ++j) {
                mp.push_back(eval(m_pos_[j], v));
                mn.push_back(eval(m_neg_[j], v));
            }
            auto measure = [](const Mat& d, const Mat& a, const Mat& b, double& abs_out, double& rel_out) {
                double res = frob(sub(d, sub(a, b)));
                abs_out = std::max(abs_out, res);
                rel_out = std::max(rel_out, res / std::max({1.0, frob(d), frob(a) + frob(b)}));
            };
            for (std::size_t j = 0; j < n; ++j) {
                Mat l = eval(ell_[j], v);
                measure(flow(ell_d_[j], v, rate), mul(mp[j + 1], l), mul(l, mp[j]), r.bulk, r.bulk_relative);
            }
            Mat km = eval(k_minus_, v), kp = eval(k_plus_, v);
            measure(flow(k_minus_d_, v, rate), mul(mp[0], km), mul(km, mn[0]), r.boundary, r.boundary_relative);
            measure(flow(k_plus_d_, v, rate), mul(mn[n], kp), mul(kp, mp[n]), r.boundary, r.boundary_relative);
        }
        return r;
    }

private:
    using Mat = std::array<double, 4>;
    using CMat = std::array<CompiledFraction, 4>;

    static Mat eval(const CMat& c, const SlotValues& v) {
        Mat m{};
        for (std::size_t i = 0; i < 4; ++i) m[i] = c[i](v);
        return m;
    }
    static Mat flow(const std::vector<CMat>& d, const SlotValues& v, const PhasePoint& rate) {
        Mat m{};
        for (std::size_t g = 0; g < d.size(); ++g) {
            Mat p = eval(d[g], v);
            for (std::size_t i = 0; i < 4; ++i) m[i] += p[i] * rate[g];
        }
        return m;
    }
    static Mat mul(const Mat& a, const Mat& b) {
        return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
                a[2] * b[1] + a[3] * b[3]};
    }
    static Mat sub(const Mat& a, const Mat& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]}; }
    static double frob(const Mat& a) { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3]); }

    std::vector<double> mus_;
    std::vector<Generator> gens_;
    std::vector<CMat> ell_, m_pos_, m_neg_;
    std::vector<std::vector<CMat>> ell_d_;
    CMat k_minus_, k_plus_;
    std::vector<CMat> k_minus_d_, k_plus_d_;
};

/// Adds zc_residual and boundary_residual channels (absolute) and their
/// *_relative counterparts.
inline void zero_curvature_residual(const DiagnosticData& d, const VectorField& f, Trajectory& tr,
                                    const std::vector<double>& mus) {
    ZeroCurvatureProbe probe(d, mus);
    auto& bulk = tr.channels["zc_residual"];
    auto& bnd = tr.channels["boundary_residual"];
    auto& bulk_rel = tr.channels["zc_relative"];
    auto& bnd_rel = tr.channels["boundary_relative"];
    for (auto* ch : {&bulk, &bnd, &bulk_rel, &bnd_rel}) ch->clear();
    for (const auto& p : tr.states) {
        SlotValues v = f.slots(p);
        auto r = probe(v, f.rate_at(v));
        bulk.push_back(r.bulk);
        bnd.push_back(r.boundary);
        bulk_rel.push_back(r.bulk_relative);
        bnd_rel.push_back(r.boundary_relative);
    }
}

/// Relative drift of H, every H^(k), the Casimir and F - e^{x_1}.
/// For BC_N the casimir_drift channel is identically zero.
inline void conserved_channels(const DiagnosticData& d, const VectorField& f, Trajectory& tr) {
    std::vector<std::pair<std::string, CompiledFraction>> qs;
    qs.emplace_back("H_drift", CompiledFraction(d.hamiltonian));
    for (const auto& [k, c] : d.conserved)
        if (!c.is_field_free()) qs.emplace_back("H" + std::to_string(k) + "_drift", CompiledFraction(c));
    const bool dn = d.model.family == ModelFamily::DN;
    if (dn) {
        qs.emplace_back("casimir_drift", CompiledFraction(Fraction(casimir(d.model.boundary.ps))));
        qs.emplace_back("F_minus_u1_drift", CompiledFraction(Fraction(gen(Generator::F()) - u(1))));
    }
    for (auto& [name, q] : qs) {
        auto& ch = tr.channels[name];
        ch.clear();
        double q0 = 0;
        for (std::size_t i = 0; i < tr.states.size(); ++i) {
            double val = q(f.slots(tr.states[i]));
            if (i == 0) q0 = val;
            ch.push_back(relative_drift(val, q0));
        }
    }
    if (!dn) tr.channels["casimir_drift"] = std::vector<double>(tr.states.size(), 0.0);
}

/// |x~_1'' - (e^{x_2 - x~_1} - e^{x~_1 - x_0})| along a D_N trajectory, with
/// c_0 = 2(F - e^{x_1}) and c_1 = 4(H^2 + E F) read from the initial point.
inline void dn_boundary_channel(const DiagnosticData& d, const VectorField& f, Trajectory& tr) {
    ModelSpec m = d.model;
    m.params.erase(Param::C0);
    m.params.erase(Param::C1);
    DnElimination el = dn_boundary_elimination(m);
    EquationsOfMotion eom = eom_from_bracket(m, d.hamiltonian);
    Fraction v1 = dn_tilde_velocity(el, eom);
    Fraction acc = bracket(d.hamiltonian, v1, m.boundary.ps);
    Fraction rhs = Fraction(u(2)) / el.u1_tilde - el.u1_tilde * el.exp_minus_x0(v1, true);
    CompiledFraction res(acc - rhs);
    auto& ch = tr.channels["x0_relation_residual"];
    ch.clear();
    if (tr.states.empty()) return;
    SlotValues v0 = f.slots(tr.states.front());
    double c0 = 2 * (v0[kSlotF] - v0[kSlotU]);
    double c1 = 4 * (v0[kSlotH] * v0[kSlotH] + v0[kSlotE] * v0[kSlotF]);
    for (const auto& p : tr.states) {
        SlotValues v = f.slots(p);
        v[static_cast<std::size_t>(Generator::param(Param::C0).slot())] = c0;
        v[static_cast<std::size_t>(Generator::param(Param::C1).slot())] = c1;
        ch.push_back(std::abs(res(v)));
    }
}

/// Random initial data: x, X uniform in [-1, 1]. For D_N, H is uniform in
/// [-1, 1]; if c_0 is assigned, F = e^{x_1} + c_0/2 and E follows from the
/// Casimir c_1/4 (c_1 defaults to 1); otherwise E is drawn and F solved,
/// redrawing until |F - e^{x_1}| >= 0.1.
inline PhasePoint random_initial_point(const ModelSpec& m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const std::size_t n = static_cast<std::size_t>(m.sites);
    PhasePoint p{std::vector<double>(2 * n)};
    for (std::size_t i = 0; i < 2 * n; ++i) p[i] = unit(rng);
    if (m.family != ModelFamily::DN) return p;
    double c1 = m.params.count(Param::C1) ? m.params.at(Param::C1).get_d() : 1.0;
    double u1 = std::exp(p[0]);
    double E = 0, F = 0, H = 0;
    if (m.params.count(Param::C0)) {
        double c0 = m.params.at(Param::C0).get_d();
        if (std::abs(c0) < 0.2) throw std::invalid_argument("c0 too close to zero for initial data");
        F = u1 + c0 / 2;
        H = unit(rng);
        E = (c1 / 4 - H * H) / F;
    } else {
        do {
            H = unit(rng);
            E = unit(rng);
            F = std::abs(E) > 1e-3 ? (c1 / 4 - H * H) / E : u1;
        } while (std::abs(F - u1) < 0.1);
    }
    p.values.insert(p.values.end(), {E, F, H});
    return p;
}

}  // namespace bilax
