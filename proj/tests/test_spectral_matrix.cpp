#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "bilax/spectral_matrix.hpp"
#include "random_elements.hpp"

using namespace bilax;

namespace {

SpectralMatrix random_matrix(std::mt19937_64& rng) {
    SpectralMatrix m(2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) m(i, j) = Fraction(testing::random_element(rng, 2, 2) + gen(kLambda));
    return m;
}

}  // namespace

TEST_CASE("permutation swaps tensor factors", "[spectral_matrix]") {
    SpectralMatrix a{{1, Fraction(X(1))}, {Fraction(u(1)), 0}};
    SpectralMatrix b{{Fraction(gen(kMu)), 2}, {3, Fraction(u(2, -1))}};
    SpectralMatrix p = SpectralMatrix::permutation();
    CHECK(p * p == SpectralMatrix::identity(4));
    CHECK(p * kron(a, b) * p == kron(b, a));
    CHECK(swap_legs(embed_a(a)) == embed_b(a));
}

TEST_CASE("partial trace of P is the identity", "[spectral_matrix]") {
    CHECK(partial_trace_a(SpectralMatrix::permutation()) == SpectralMatrix::identity(2));
    // tr_a (A_a B_b) = tr(A) B.
    SpectralMatrix a{{Fraction(X(1)), 1}, {2, Fraction(u(1))}};
    SpectralMatrix b{{0, 1}, {Fraction(gen(kMu)), 3}};
    CHECK(partial_trace_a(embed_a(a) * embed_b(b)) == a.trace() * b);
}

TEST_CASE("rational r-matrix at lambda - mu", "[spectral_matrix]") {
    SpectralMatrix r = rational_r(kLambda, kMu);
    Fraction pole = Fraction::ratio(RingElement(1), gen(kLambda) - gen(kMu));
    CHECK(r == pole * SpectralMatrix::permutation());
    // r_ba = r_ab for P/z since P commutes with itself.
    CHECK(r_ba_at(rational_r(), gen(kLambda) + gen(kMu)) == r_at(rational_r(), gen(kLambda) + gen(kMu)));
}

TEST_CASE("three-leg embedding agrees with Kronecker products", "[spectral_matrix]") {
    SpectralMatrix a{{1, 2}, {3, 4}};
    SpectralMatrix b{{0, 1}, {5, Fraction(X(1))}};
    SpectralMatrix ab = kron(a, b);
    SpectralMatrix one = SpectralMatrix::identity(2);
    // Legs (0,1): (a (x) b) (x) 1 in the 8x8 layout 4*i0 + 2*i1 + i2.
    SpectralMatrix e01 = embed_legs(ab, 0, 1);
    SpectralMatrix e12 = embed_legs(ab, 1, 2);
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c) {
            int r0 = r >> 2, r1 = (r >> 1) & 1, r2 = r & 1;
            int c0 = c >> 2, c1 = (c >> 1) & 1, c2 = c & 1;
            CHECK(e01(r, c) == a(r0, c0) * b(r1, c1) * one(r2, c2));
            CHECK(e12(r, c) == one(r0, c0) * a(r1, c1) * b(r2, c2));
        }
    CHECK_THROWS_AS(embed_legs(ab, 1, 1), StructuralError);
}

TEST_CASE("2x2 inverse", "[spectral_matrix]") {
    SpectralMatrix ell{{Fraction(gen(kLambda) + X(1)), Fraction(-u(1))}, {Fraction(u(1, -1)), 0}};
    CHECK(det_2x2(ell) == Fraction(1));
    CHECK(ell * inverse_2x2(ell) == SpectralMatrix::identity(2));
    SpectralMatrix k{{Fraction(gen(kLambda)), 1}, {1, Fraction(gen(kLambda))}};
    CHECK((inverse_2x2(k) * k).reduced() == SpectralMatrix::identity(2));
    CHECK_THROWS_AS(inverse_2x2(SpectralMatrix{{1, 2}, {2, 4}}), StructuralError);
}

TEST_CASE("expansion at infinity of 1/(lambda - mu)", "[spectral_matrix]") {
    // Oracle: geometric series sum_{k>=0} mu^k lambda^{-k-1}.
    Fraction f = Fraction::ratio(RingElement(1), gen(kLambda) - gen(kMu));
    auto series = expand_at_infinity(f, kLambda, -5);
    REQUIRE(series.size() == 5);
    for (int k = 0; k < 5; ++k) CHECK(series.at(-k - 1) == Fraction(gen(kMu, k)));
    // Polynomial part passes through; (lambda^2 + X)/(lambda + mu) = lambda - mu + (mu^2 + X)/lambda + ...
    Fraction g = Fraction::ratio(gen(kLambda, 2) + X(1), gen(kLambda) + gen(kMu));
    auto s2 = expand_at_infinity(g, kLambda, -2);
    CHECK(s2.at(1) == Fraction(1));
    CHECK(s2.at(0) == Fraction(-gen(kMu)));
    CHECK(s2.at(-1) == Fraction(gen(kMu, 2) + X(1)));
    CHECK(s2.at(-2) == Fraction(-gen(kMu) * (gen(kMu, 2) + X(1))));
}

TEST_CASE("matrix product is associative and distributes", "[spectral_matrix][property]") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        SpectralMatrix a = random_matrix(rng), b = random_matrix(rng), c = random_matrix(rng);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a * b).trace() == (b * a).trace());
        CHECK(kron(a, b) * kron(c, a) == kron(a * c, b * a));
    }
}

TEST_CASE("bad dimensions are rejected", "[spectral_matrix]") {
    CHECK_THROWS_AS(SpectralMatrix(3), StructuralError);
    CHECK_THROWS_AS(SpectralMatrix::identity(2) + SpectralMatrix::identity(4), StructuralError);
    CHECK_THROWS_AS(partial_trace_a(SpectralMatrix::identity(2)), StructuralError);
}
