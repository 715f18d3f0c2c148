#include <qspt/atomic.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

using namespace qspt;
using complex = std::complex<double>;

namespace {

struct Rational {
    long long num;
    long long den;
};

Rational reduce(Rational r)
{
    const long long g = std::gcd(r.num, r.den);
    return g ? Rational{r.num / g, r.den / g} : r;
}

/// Squared prefactor of the d- table as an exact fraction, written out
/// independently of the library for the three branches.
Rational table_prefactor_squared(int F_to, int M_to, int F_from, int M_from)
{
    (void)M_to;
    const long long M = M_from;
    if (F_to == F_from) {
        const long long F = F_from;
        return reduce({(F - M + 1) * (F + M), F * (F + 1) * (2 * F + 1)});
    }
    if (F_to == F_from + 1) {
        const long long F = F_to;
        return reduce({(F - M + 1) * (F - M), F * (2 * F - 1) * (2 * F + 1)});
    }
    const long long F = F_from;
    return reduce({(F + M + 1) * (F + M), F * (2 * F - 1) * (2 * F + 1)});
}

} // namespace

TEST(DipoleMinus, SameLevelExamples)
{
    EXPECT_NEAR(dipole_minus(1, 0, 1, 1, 1.0), std::sqrt(1.0 / 3.0), 1e-15);
    EXPECT_NEAR(dipole_minus(2, 1, 2, 2, 1.0), std::sqrt(2.0 / 15.0), 1e-15);
    EXPECT_NEAR(dipole_minus(2, 1, 2, 2, 3.5), 3.5 * std::sqrt(2.0 / 15.0), 1e-14);
}

TEST(DipoleMinus, SelectionRules)
{
    auto code_of = [](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::IoError;
    };
    EXPECT_EQ(code_of([] { dipole_minus(1, -2, 1, -1, 1.0); }), ErrorCode::SelectionRuleViolation);
    EXPECT_EQ(code_of([] { dipole_minus(1, 1, 1, 1, 1.0); }), ErrorCode::SelectionRuleViolation);
    EXPECT_EQ(code_of([] { dipole_minus(1, 0, 1, 2, 1.0); }), ErrorCode::SelectionRuleViolation);
    EXPECT_EQ(code_of([] { dipole_minus(3, 0, 1, 1, 1.0); }), ErrorCode::UnsupportedBranch);
    EXPECT_EQ(code_of([] { dipole_plus(1, 0, 1, 0, 1.0); }), ErrorCode::SelectionRuleViolation);
}

TEST(DipolePlus, ConjugateOfMinus)
{
    EXPECT_EQ(dipole_plus(2, 1, 1, 0, 1.7), dipole_minus(1, 0, 2, 1, 1.7));
    EXPECT_EQ(dipole_plus(2, 1, 2, 0, 1.0), dipole_minus(2, 0, 2, 1, 1.0));
}

TEST(DipoleTables, ExhaustiveSmallF)
{
    for (int F_from = 0; F_from <= 4; ++F_from)
        for (int F_to = std::max(0, F_from - 1); F_to <= F_from + 1; ++F_to)
            for (int M_from = -F_from; M_from <= F_from; ++M_from) {
                const int M_to = M_from - 1;
                if (std::abs(M_to) > F_to || (F_to == 0 && F_from == 0))
                    continue;
                const Rational r = table_prefactor_squared(F_to, M_to, F_from, M_from);
                const double expected = std::sqrt(static_cast<double>(r.num) / static_cast<double>(r.den));
                EXPECT_NEAR(dipole_minus(F_to, M_to, F_from, M_from, 1.0), expected, 1e-15)
                    << F_to << ',' << M_to << " <- " << F_from << ',' << M_from;
                EXPECT_EQ(dipole_plus(F_from, M_from, F_to, M_to, 1.0), dipole_minus(F_to, M_to, F_from, M_from, 1.0));
            }
}

TEST(DipoleTables, SameLevelSumRule)
{
    for (int F = 1; F <= 4; ++F) {
        // sum_M (F-M+1)(F+M) exhaustively, as an exact integer
        long long num = 0;
        for (int M = -F + 1; M <= F; ++M)
            num += static_cast<long long>(F - M + 1) * (F + M);
        const double expected = static_cast<double>(num) / (F * (F + 1.0) * (2.0 * F + 1.0));
        double sum = 0.0;
        for (int M = -F + 1; M <= F; ++M)
            sum += std::pow(dipole_minus(F, M - 1, F, M, 1.0), 2);
        EXPECT_NEAR(sum, expected, 1e-14) << "F = " << F;
    }
}

TEST(OscillatorStrength, Scaling)
{
    const double w = cgs::two_pi * 5.09e14;
    const double d = reduced_dipole_from_oscillator_strength(0.1, w, 1);
    EXPECT_NEAR(reduced_dipole_from_oscillator_strength(0.4, w, 1) / d, 2.0, 1e-14);
    EXPECT_NEAR(reduced_dipole_from_oscillator_strength(0.1, 4.0 * w, 1) / d, 0.5, 1e-14);
    EXPECT_THROW(reduced_dipole_from_oscillator_strength(0.0, w, 1), Error);
    EXPECT_THROW(reduced_dipole_from_oscillator_strength(0.1, -w, 1), Error);
}

TEST(OscillatorStrength, SodiumD1Magnitude)
{
    // Line strength S = sum over sublevels |<m|d|m'>|^2 for Na D1, from the
    // tabulated J-reduced element 3.5246 e a0: S = (2J + 1) * 3.5246^2.
    const double ea0 = cgs::electron_charge * 0.529177210903e-8;
    const double tabulated = std::sqrt(2.0) * 3.5246 * ea0;
    const double d = reduced_dipole_from_oscillator_strength(0.32, cgs::two_pi * 5.09e14, 2);
    EXPECT_LT(std::abs(d / tabulated - 1.0), 0.2);
}

TEST(OscillatorStrength, RoundTrip)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> f(1e-3, 1.0), w(1e13, 1e16);
    for (int i = 0; i < 200; ++i) {
        const double fi = f(rng), wi = w(rng);
        const int F = i % 5;
        const double back =
            oscillator_strength_from_reduced_dipole(reduced_dipole_from_oscillator_strength(fi, wi, F), wi, F);
        EXPECT_NEAR(back / fi, 1.0, 1e-12);
    }
}

TEST(ThermalWeights, Limits)
{
    const double delta0 = cgs::two_pi * 1771.6e6;
    auto w0 = thermal_weights(delta0, 0.0);
    EXPECT_EQ(w0.lower, 1.0);
    EXPECT_EQ(w0.upper, 0.0);
    auto winf = thermal_weights(delta0, INFINITY);
    EXPECT_EQ(winf.lower, 0.5);
    EXPECT_EQ(winf.upper, 0.5);
    auto hot = thermal_weights(delta0, 1e12);
    EXPECT_NEAR(hot.lower, 0.5, 1e-9);
    EXPECT_THROW(thermal_weights(delta0, -1.0), Error);
}

TEST(ThermalWeights, MicroKelvinSodium)
{
    const double delta0 = cgs::two_pi * 1771.6e6;
    const double x = cgs::hbar * delta0 / (cgs::boltzmann * 1e-6);
    EXPECT_NEAR(x, 8.5e4, 0.01e4);
    const auto w = thermal_weights(delta0, 1e-6);
    EXPECT_EQ(w.lower, 1.0);
    EXPECT_EQ(w.upper, 0.0);
}

TEST(ThermalWeights, SumToOne)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> t(0.0, 1.0);
    const double delta0 = cgs::two_pi * 1771.6e6;
    for (int i = 0; i < 1000; ++i) {
        const auto w = thermal_weights(delta0, std::pow(t(rng), 4) * 10.0);
        EXPECT_NEAR(w.lower + w.upper, 1.0, 1e-15);
        EXPECT_GE(w.upper, 0.0);
        EXPECT_LE(w.lower, 1.0);
        EXPECT_GE(w.lower, w.upper);
    }
}

TEST(SodiumPreset, Frequencies)
{
    const auto na = sodium_preset();
    EXPECT_NEAR(na.omega1 / na.delta0, 287351.0, 1e-9);
    EXPECT_NEAR(na.omega2 / na.delta0, 287350.0, 1e-9);
    EXPECT_NEAR((na.omega1 - na.omega2) / na.delta0, 1.0, 1e-6);
    EXPECT_NEAR(na.delta0 / cgs::two_pi, 1.7716e9, 1e-3);
    EXPECT_EQ(na.ground_F_lower, 1);
    EXPECT_EQ(na.ground_F_upper, 2);

    const auto ang = sodium_preset(FrequencyConvention::angular);
    EXPECT_NEAR(ang.delta0, 1.7716e9, 1e-3);
}

TEST(SodiumPreset, DipolesMatchOracle)
{
    // tests/oracle/sodium_oracle.py
    const auto na = sodium_preset();
    EXPECT_NEAR(na.d1 / 6.3309104648046040581e-18, 1.0, 1e-12);
    EXPECT_NEAR(na.d2 / 4.4766375102485192932e-18, 1.0, 1e-12);
    ASSERT_TRUE(na.f1 && na.f2);
    const double r1 = reduced_dipole_from_oscillator_strength(*na.f1, na.omega1, 1);
    EXPECT_NEAR(oscillator_strength_from_reduced_dipole(r1, na.omega1, 1), *na.f1, 1e-15);
}

TEST(SpeciesFile, ParsesDocumentedKeys)
{
    const auto kv = KeyValueFile::parse(R"(
# sodium, written out by hand
label = Na test
delta0_mhz = 1771.6
omega1_over_delta0 = 287351
omega2_over_delta0 = 287350
f1 = 0.26666666666666666
f2 = 0.16
F_lower = 1
F_upper = 2
)");
    const auto s = species_from_keyvalue(kv, FrequencyConvention::cyclic);
    const auto na = sodium_preset();
    EXPECT_EQ(s.label, "Na test");
    EXPECT_NEAR(s.d1 / na.d1, 1.0, 1e-12);
    EXPECT_NEAR(s.d2 / na.d2, 1.0, 1e-12);
}

TEST(SpeciesFile, Diagnostics)
{
    try {
        species_from_keyvalue(KeyValueFile::parse("label = x\ndelta0_mhz = 1\nbogus = 3\n", "sp.txt"),
                              FrequencyConvention::cyclic);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ConfigError);
    }
    try {
        KeyValueFile::parse("a = 1\nthis line is wrong\n", "sp.txt");
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("sp.txt:2"), std::string::npos);
    }
    // omega1 - omega2 must be the splitting
    EXPECT_THROW(species_from_keyvalue(KeyValueFile::parse("delta0_mhz = 1771.6\nomega1_over_delta0 = 10\n"
                                                           "omega2_over_delta0 = 8\nf1 = 0.1\nf2 = 0.1\n"
                                                           "F_lower = 1\nF_upper = 2\n"),
                                       FrequencyConvention::cyclic),
                 Error);
}

TEST(ScaleParameters, ZeroField)
{
    const auto na = sodium_preset();
    const auto sp = scale_parameters(na, 0.0, 287360.0 * na.delta0);
    EXPECT_EQ(sp.eta, complex(0.0));
    EXPECT_EQ(sp.xi1, complex(0.0));
    EXPECT_EQ(sp.xi2, complex(0.0));
}

TEST(ScaleParameters, SodiumDetunings)
{
    const auto na = sodium_preset();
    const auto sp = scale_parameters(na, 1.0, 287360.0 * na.delta0);
    EXPECT_NEAR(sp.det1, 9.0, 1e-9);
    EXPECT_NEAR(sp.det2, 10.0, 1e-9);
    EXPECT_NEAR(sp.det1 - sp.det2, -1.0, 1e-9);
    EXPECT_NEAR(std::abs(sp.xi1 / sp.xi2), na.d1 / na.d2, 1e-14);
}

TEST(ScaleParameters, SymmetricArms)
{
    AtomSpecies s = sodium_preset();
    s.d2 = s.d1;
    const complex E0(3.0, -1.0);
    const auto sp = scale_parameters(s, E0, 287360.0 * s.delta0);
    const complex expected = E0 * (s.d1 / (cgs::hbar * s.delta0));
    EXPECT_NEAR(std::abs(sp.eta - expected), 0.0, 1e-15 * std::abs(expected));
    EXPECT_NEAR(std::abs(sp.xi1 - expected), 0.0, 1e-15 * std::abs(expected));
    EXPECT_NEAR(std::abs(sp.xi2 - expected), 0.0, 1e-15 * std::abs(expected));
}

TEST(ScaleParameters, LinearInField)
{
    const auto na = sodium_preset();
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n(0.0, 100.0);
    for (int i = 0; i < 100; ++i) {
        const complex E0(n(rng), n(rng));
        const auto a = scale_parameters(na, E0, 287360.0 * na.delta0);
        const auto b = scale_parameters(na, 2.0 * E0, 287360.0 * na.delta0);
        EXPECT_EQ(b.eta, 2.0 * a.eta);
    }
}

TEST(ScaleParameters, EtaRoundTripAndWithEta)
{
    const auto na = sodium_preset();
    const complex eta(0.03, 0.01);
    const auto direct = scale_parameters(na, field_for_eta(na, eta), 287360.0 * na.delta0);
    const auto via_eta = scale_for_eta(na, eta, 287360.0 * na.delta0);
    EXPECT_NEAR(std::abs(direct.eta - eta), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(direct.xi1 - via_eta.xi1), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(direct.xi2 - via_eta.xi2), 0.0, 1e-15);
}

TEST(ScaleParameters, Errors)
{
    const auto na = sodium_preset();
    try {
        scale_parameters(na, 1.0, 287353.0 * na.delta0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DetuningTooSmall);
    }
    // a looser floor admits the same carrier
    EXPECT_NO_THROW(scale_parameters(na, 1.0, 287353.0 * na.delta0, ScaleOptions{1.0}));
    AtomSpecies bad = na;
    bad.delta0 = 0.0;
    try {
        scale_parameters(bad, 1.0, 287360.0 * na.delta0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NonPositiveSplitting);
    }
}

TEST(ScaleParameters, SiFieldConversion)
{
    EXPECT_NEAR(std::abs(field_from_si(2.99792458e4)), 1.0, 1e-15);
}
