#pragma once

// Parametric rate-distortion and channel-capacity computations built on the
// tilted log-partition function Lambda(beta) = sum_y q(y) ln sum_x p(x) e^{-beta d(x, y)}.

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace statmech::coding {

//! Source q(y), reproduction (coding) distribution p(x) and distortion d(x, y).
struct RdProblem
{
    std::vector<double> source;
    std::vector<double> coding;
    //! Row-major, coding.size() rows by source.size() columns.
    std::vector<double> distortion;

    [[nodiscard]] double d(std::size_t x, std::size_t y) const { return distortion[x * source.size() + y]; }

    //! Throws NormalizationError or ShapeError when the contents are inconsistent.
    void validate() const;

    //! Uniform binary source and reproduction with Hamming distortion.
    static RdProblem binary_hamming();
};

//! Lambda(beta) with its first two derivatives expressed as distortion moments.
struct TiltedMoments
{
    double logPartition = 0.0;
    //! D_beta = -Lambda'(beta).
    double distortion = 0.0;
    //! Lambda''(beta), the q-average of the conditional variance of d(X, y).
    double mmse = 0.0;
};

//! Anything that can evaluate the tilted moments of a rate-distortion problem.
class DistortionModel
{
public:
    virtual ~DistortionModel() = default;
    [[nodiscard]] virtual TiltedMoments moments(double beta) const = 0;
    //! sum_y q(y) min_x d(x, y).
    [[nodiscard]] virtual double min_distortion() const = 0;
    //! sum_{x,y} p(x) q(y) d(x, y).
    [[nodiscard]] virtual double mean_distortion() const = 0;
    //! lim R(D) as D -> min_distortion().
    [[nodiscard]] virtual double max_rate() const = 0;
};

//! Direct summation over a finite RdProblem.
class DenseDistortionModel final : public DistortionModel
{
public:
    explicit DenseDistortionModel(RdProblem problem);

    [[nodiscard]] TiltedMoments moments(double beta) const override;
    [[nodiscard]] double min_distortion() const override;
    [[nodiscard]] double mean_distortion() const override;
    [[nodiscard]] double max_rate() const override;
    [[nodiscard]] const RdProblem& problem() const { return m_Problem; }

private:
    RdProblem m_Problem;
    std::vector<double> m_ColumnMin;
};

//! Uniform source and coding distribution on the same uniform grid of [-halfWidth, halfWidth]
//! with d(x, y) = |x - y|^theta. Evaluated in O(points) per beta with prefix sums over offsets.
class UniformGridPowerModel final : public DistortionModel
{
public:
    UniformGridPowerModel(std::size_t points, double halfWidth, double theta);

    [[nodiscard]] TiltedMoments moments(double beta) const override;
    [[nodiscard]] double min_distortion() const override { return 0.0; }
    [[nodiscard]] double mean_distortion() const override { return m_Mean; }
    [[nodiscard]] double max_rate() const override;
    //! The equivalent dense problem; only sensible for small grids.
    [[nodiscard]] RdProblem dense() const;

private:
    std::size_t m_Points;
    double m_Step;
    double m_Theta;
    std::vector<double> m_OffsetDistortion;
    double m_Mean = 0.0;
};

struct RdPoint
{
    double distortion = 0.0;
    double rate = 0.0;
    //! Minimizing beta, which equals -R'(D); +inf at the minimum distortion.
    double beta = 0.0;
};

//! R(D) = -min_{beta >= 0} [beta D + Lambda(beta)].
RdPoint rd_parametric(const DistortionModel& model, double distortion);
RdPoint rd_parametric(const RdProblem& problem, double distortion);

//! The point (D_beta, R(D_beta)) of the curve traced by a given beta.
RdPoint rd_at_beta(const DistortionModel& model, double beta);

//! Inverse of rd_parametric: D(R) with the beta at which R(D_beta) = R.
RdPoint distortion_rate(const DistortionModel& model, double rate);

struct MmseRepresentation
{
    double beta = 0.0;
    //! integral_0^beta b mmse(b) db.
    double rateIntegral = 0.0;
    //! -(beta D_beta + Lambda(beta)).
    double rateDirect = 0.0;
    double distortion = 0.0;
    //! D_0 - integral_0^beta mmse(b) db.
    double distortionIntegral = 0.0;
};

MmseRepresentation rd_mmse_representation(const DistortionModel& model, double beta);
MmseRepresentation rd_mmse_representation(const RdProblem& problem, double beta);

struct CapacityResult
{
    double capacity = 0.0;
    double beta = 0.0;
};

//! C = -min_beta [beta H(Y|X) + sum_y q(y) ln sum_x p(x) W(y|x)^beta] for a channel
//! matrix given row-major as W(y|x) with inputs as rows.
CapacityResult capacity_parametric(std::span<const double> input, std::span<const double> channel,
                                   std::size_t outputs);

//! The binary symmetric channel with uniform input.
CapacityResult capacity_parametric(double crossover);

struct HighResFit
{
    double theta = 0.0;
    std::vector<double> rates;
    std::vector<double> distortions;
    //! Least-squares slope of ln D against R.
    double slope = 0.0;
    double intercept = 0.0;
};

//! Fits the exponential decay of D(R) at high rate for d = |x - y|^theta on a uniform grid.
HighResFit highres_check(double theta, std::span<const double> rates, std::size_t points = 2001,
                         double halfWidth = 1.0);

//! Distortion of tree codes: max_{beta >= 0} -(ln sum_x p(x) e^{-beta d(x, y)} + R) / beta,
//! which requires every source letter to see the same distortion distribution.
RdPoint dprm_distortion(const RdProblem& problem, double rate);

//! Throws DomainError unless all columns of the problem carry the same weighted distortion multiset.
void check_symmetric(const RdProblem& problem);

} // namespace statmech::coding
