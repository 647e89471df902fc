#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace bilax {

/// Raised when an expression refers to a generator the active structure
/// does not know, or when a structural precondition is violated.
class StructuralError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Largest number of lattice sites representable by the slot layout.
inline constexpr int kMaxSites = 8;

enum class Kind : std::uint8_t {
    Spectral,    // lambda, mu, nu, z: formal spectral variables (central)
    Parameter,   // theta_1, alpha_1, ... (central)
    SlE,
    SlF,
    SlH,
    Coordinate,  // u_j = e^{x_j}, Laurent
    Momentum,    // X_j
};

enum class Spectral : std::uint8_t { Lambda = 0, Mu = 1, Nu = 2, Z = 3 };

enum class Param : std::uint8_t {
    Theta1 = 0,
    Alpha1 = 1,
    Beta1 = 2,
    ThetaN = 3,
    AlphaN = 4,
    BetaN = 5,
    C0 = 6,
    C1 = 7,
};

inline constexpr int kSpectralSlots = 4;
inline constexpr int kParamSlots = 8;
inline constexpr int kSlotSpectral = 0;
inline constexpr int kSlotParam = kSlotSpectral + kSpectralSlots;
inline constexpr int kSlotE = kSlotParam + kParamSlots;
inline constexpr int kSlotF = kSlotE + 1;
inline constexpr int kSlotH = kSlotF + 1;
inline constexpr int kSlotU = kSlotH + 1;
inline constexpr int kSlotX = kSlotU + kMaxSites;
inline constexpr int kSlots = kSlotX + kMaxSites;

/// A phase-space (or spectral) generator. Sites are 1-based.
struct Generator {
    Kind kind = Kind::Parameter;
    std::uint8_t index = 0;

    friend constexpr auto operator<=>(const Generator&, const Generator&) = default;

    static constexpr Generator spectral(Spectral s) { return {Kind::Spectral, static_cast<std::uint8_t>(s)}; }
    static constexpr Generator param(Param p) { return {Kind::Parameter, static_cast<std::uint8_t>(p)}; }
    static constexpr Generator E() { return {Kind::SlE, 0}; }
    static constexpr Generator F() { return {Kind::SlF, 0}; }
    static constexpr Generator H() { return {Kind::SlH, 0}; }
    static Generator u(int site) { return {Kind::Coordinate, checked_site(site)}; }
    static Generator X(int site) { return {Kind::Momentum, checked_site(site)}; }

    /// Central generators have vanishing bracket with everything.
    constexpr bool is_central() const { return kind == Kind::Spectral || kind == Kind::Parameter; }
    constexpr bool is_field() const { return !is_central(); }
    constexpr bool allows_negative_powers() const { return kind == Kind::Coordinate; }

    int slot() const {
        switch (kind) {
        case Kind::Spectral: return kSlotSpectral + index;
        case Kind::Parameter: return kSlotParam + index;
        case Kind::SlE: return kSlotE;
        case Kind::SlF: return kSlotF;
        case Kind::SlH: return kSlotH;
        case Kind::Coordinate: return kSlotU + index - 1;
        case Kind::Momentum: return kSlotX + index - 1;
        }
        throw StructuralError("bad generator kind");
    }

    static Generator from_slot(int s) {
        if (s < 0 || s >= kSlots) throw StructuralError("slot out of range");
        if (s < kSlotParam) return {Kind::Spectral, static_cast<std::uint8_t>(s - kSlotSpectral)};
        if (s < kSlotE) return {Kind::Parameter, static_cast<std::uint8_t>(s - kSlotParam)};
        if (s == kSlotE) return E();
        if (s == kSlotF) return F();
        if (s == kSlotH) return H();
        if (s < kSlotX) return {Kind::Coordinate, static_cast<std::uint8_t>(s - kSlotU + 1)};
        return {Kind::Momentum, static_cast<std::uint8_t>(s - kSlotX + 1)};
    }

    /// Symbolic name, e.g. "X_2", "theta_1", "lambda". Coordinates print as
    /// their logarithm "x_j" inside exponentials; see RingElement::to_string.
    std::string name() const {
        static constexpr std::array<const char*, kSpectralSlots> spectral_names{"lambda", "mu", "nu", "z"};
        static constexpr std::array<const char*, kParamSlots> param_names{
            "theta_1", "alpha_1", "beta_1", "theta_N", "alpha_N", "beta_N", "c_0", "c_1"};
        switch (kind) {
        case Kind::Spectral: return spectral_names.at(index);
        case Kind::Parameter: return param_names.at(index);
        case Kind::SlE: return "E";
        case Kind::SlF: return "F";
        case Kind::SlH: return "H";
        case Kind::Coordinate: return "u_" + std::to_string(index);
        case Kind::Momentum: return "X_" + std::to_string(index);
        }
        return "?";
    }

private:
    static std::uint8_t checked_site(int site) {
        if (site < 1 || site > kMaxSites) {
            throw StructuralError("site index " + std::to_string(site) + " outside 1.." +
                                  std::to_string(kMaxSites));
        }
        return static_cast<std::uint8_t>(site);
    }
};

inline const Generator kLambda = Generator::spectral(Spectral::Lambda);
inline const Generator kMu = Generator::spectral(Spectral::Mu);
inline const Generator kNu = Generator::spectral(Spectral::Nu);
inline const Generator kZ = Generator::spectral(Spectral::Z);

}  // namespace bilax
