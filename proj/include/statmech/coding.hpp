#pragma once

// Random-code ensembles on the binary symmetric channel: finite-temperature
// decoder phases, correct-decoding and erasure exponents, hierarchical
// (two-stage) code exponents and the joint source-channel phase diagram.

#include <optional>
#include <string>

namespace statmech::coding {

//! Binary symmetric channel with crossover probability in (0, 1/2).
struct Bsc
{
    double crossover = 0.1;

    void validate() const;
    //! ln((1 - p) / p).
    [[nodiscard]] double coupling() const;
    //! ln 2 - h2(p).
    [[nodiscard]] double capacity() const;
};

//! An optimized exponent with the parameters that achieve it.
struct ExponentResult
{
    double value = 0.0;
    std::optional<double> beta;
    std::optional<double> s;
    std::optional<double> rho;
    std::optional<double> delta;
    std::optional<double> magnetization;
};

enum class DecoderPhase
{
    Ferromagnetic,
    Paramagnetic,
    Glassy
};

std::string to_string(DecoderPhase phase);

//! p^beta / (p^beta + (1-p)^beta).
double p_beta(double p, double beta);

//! Boundary beta_c(R) between the paramagnetic and glassy behaviour of the incorrect codewords.
double ze_critical_beta(double rate, double p);

struct BranchValue
{
    double value = 0.0;
    DecoderPhase phase = DecoderPhase::Paramagnetic;
};

//! Exponent of the partition function restricted to incorrect codewords.
BranchValue ze_phi(double beta, double rate, double p);

struct PhasePoint
{
    double beta = 0.0;
    double rate = 0.0;
    DecoderPhase phase = DecoderPhase::Paramagnetic;
    //! The larger of the two exponents below.
    double dominantExponent = 0.0;
    double ferromagneticExponent = 0.0;
    double randomExponent = 0.0;
};

//! beta (ln(1 - p) - J p), the exponent contributed by the transmitted codeword.
double ferromagnetic_exponent(double beta, double p);

PhasePoint decoder_phase(double beta, double rate, double p);

struct DecoderBoundaries
{
    //! Paramagnetic / glassy boundary of the incorrect-codeword part.
    double paraGlassyBeta = 0.0;
    //! Inverse temperature above which the transmitted codeword dominates; empty for R >= C.
    std::optional<double> ferromagneticBeta;
};

DecoderBoundaries decoder_boundaries(double rate, double p);

//! Exponent of the average probability of correct decoding above capacity,
//! D(delta_GV(R) || p); zero when delta_GV(R) > p.
double pc_exponent(double rate, double p);

struct ErasureSettings
{
    double crossover = 0.1;
    double beta = 0.5;
    double threshold = 0.001;
    double gridStep = 0.005;
    //! Upper end of the s search for the direct exponent.
    double sMax = 5.0;
    //! Golden-section polish around the best grid cell of the direct exponent.
    bool refine = false;
};

//! Exponent obtained through Jensen's inequality: grid search over 0 <= s <= rho <= 1.
ExponentResult erasure_exponent_jensen(double rate, const ErasureSettings& settings);

//! Exponent obtained from the direct moment analysis: grid search over s in [0, sMax].
ExponentResult erasure_exponent_direct(double rate, const ErasureSettings& settings);

//! ln[(1 - delta_GV(R)) / delta_GV(R)], the slope at which u(s, R) changes form.
double hierarchical_knee(double rate);

//! Exponent u(s, R) of the characteristic function of the distortion of a random code.
double hierarchical_u(double s, double rate);

struct TwoStageExponent
{
    double value = 0.0;
    //! lambda R1 + (1 - lambda) R2.
    double rate = 0.0;
    //! False when R1 > R2 and s exceeds the range where u(s, R) is known to hold.
    bool valid = true;
    //! The s range over which the value is asserted; empty when unlimited.
    std::optional<double> validUpTo;
};

TwoStageExponent hierarchical_two_stage(double s, double firstRate, double secondRate, double lambda);

struct JsccBoundaries
{
    //! 1/2 ln(q / (1 - q)).
    double field = 0.0;
    //! Root in [0, 1/2] of h2(q) = theta C.
    double qStar = 0.0;
    double fieldBoundary = 0.0;
    //! Glassy / paramagnetic boundary; +inf when the equation has no finite root.
    double criticalBeta = 0.0;
};

JsccBoundaries jscc_boundaries(double p, double q, double theta);

//! Root of ln 2 - h2(p_beta) = h2((1 + tanh(beta B)) / 2) / theta; +inf when none exists.
double jscc_critical_beta(double field, double theta, double p);

//! Exponent at magnetization m before maximization.
double jscc_psi(double beta, double magnetization, double theta, double p);

struct JsccState
{
    double phi = 0.0;
    double magnetization = 0.0;
    DecoderPhase phase = DecoderPhase::Paramagnetic;
};

JsccState jscc_phi(double beta, double field, double theta, double p);

} // namespace statmech::coding
