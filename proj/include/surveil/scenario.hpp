#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace surveil {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;

/// 2D position in meters.
struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

enum class Node { Alan, Bob, Rey, Eve };

/// Positions of the four nodes. Alan is the source, Bob the suspicious
/// receiver, Rey the active surface, Eve the legitimate monitor.
struct NodeLayout {
    Point2 alan{0.0, 0.0};
    Point2 bob{8.0, 0.0};
    Point2 rey{7.0, 4.0};
    Point2 eve{5.0, 0.0};
    Point2 rey_array_axis{1.0, 0.0};  // ULA orientation, unit norm

    Point2 position(Node node) const;
    double distance(Node a, Node b) const;
    /// Throws std::invalid_argument when two nodes coincide or the axis is not unit.
    void validate() const;
};

struct FadingParams {
    double exp_direct = 3.5;    // Alan-Bob, Alan-Eve
    double exp_ris = 2.2;       // Alan-Rey, Rey-Bob, Rey-Eve
    double ref_loss_db = -30.0; // gain at 1 m
    double rician_k = 5.0;      // linear
    double element_spacing = 0.5;

    void validate() const;
};

/// One realization of every link. Vectors are indexed by reflecting element.
struct ChannelSet {
    cplx h_ab;
    cplx h_ae;
    CVector h_ar;
    CVector h_rb;
    CVector h_re;

    Eigen::Index n_r() const { return h_ar.size(); }
    bool finite() const;
};

/// Deterministic random stream keyed by (seed, stream_index). Each Monte
/// Carlo realization owns one; streams are independent of scheduling.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_index);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_index() const { return stream_; }

    /// Circularly symmetric CN(0,1) sample.
    cplx complex_normal();

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Large-scale gain 10^(ref_loss_db/10) * distance^(-exponent).
double path_loss_gain(double distance, double exponent, double ref_loss_db);

/// LoS array response at Rey towards `endpoint`; entry n = exp(j 2 pi spacing n sin(theta)).
CVector los_steering(const NodeLayout& layout, Node endpoint, Eigen::Index n_elements,
                     double spacing);

cplx draw_rayleigh(RngStream& rng, double gain);
cplx draw_rician(RngStream& rng, double gain, double k, cplx los);

/// Average gain of each link for the layout, in link order AB, AE, AR, RB, RE.
struct LinkGains {
    double ab, ae, ar, rb, re;
};
LinkGains link_gains(const NodeLayout& layout, const FadingParams& fading);

/// Draws one ChannelSet. Element n consumes its three Rician draws (AR, RB, RE)
/// together, so a larger n_r extends a smaller one drawn from the same stream.
ChannelSet generate_channels(const NodeLayout& layout, const FadingParams& fading,
                             Eigen::Index n_r, RngStream& rng);

/// The deterministic LoS part of the Rey links (NLoS forced to zero).
ChannelSet los_only_channels(const NodeLayout& layout, const FadingParams& fading,
                             Eigen::Index n_r);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

}  // namespace surveil
