#include "surveil/scenario.hpp"

#include <numbers>
#include <stdexcept>
#include <string>

namespace surveil {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
    const std::uint64_t a = splitmix64(seed);
    const std::uint64_t b = splitmix64(a ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return std::mt19937_64(seq);
}

cplx rician_compose(double gain, double k, cplx los, cplx nlos) {
    return std::sqrt(gain) * (std::sqrt(k / (1.0 + k)) * los + std::sqrt(1.0 / (1.0 + k)) * nlos);
}

// Shared by the random and the LoS-only builders; `nlos` supplies the
// scattered component of each draw.
template <class NlosSource>
ChannelSet assemble(const NodeLayout& layout, const FadingParams& fading, Eigen::Index n_r,
                    NlosSource&& nlos) {
    layout.validate();
    fading.validate();
    const LinkGains g = link_gains(layout, fading);
    const CVector los_ar = los_steering(layout, Node::Alan, n_r, fading.element_spacing);
    const CVector los_rb = los_steering(layout, Node::Bob, n_r, fading.element_spacing);
    const CVector los_re = los_steering(layout, Node::Eve, n_r, fading.element_spacing);

    ChannelSet ch;
    ch.h_ab = std::sqrt(g.ab) * nlos();
    ch.h_ae = std::sqrt(g.ae) * nlos();
    ch.h_ar.resize(n_r);
    ch.h_rb.resize(n_r);
    ch.h_re.resize(n_r);
    for (Eigen::Index n = 0; n < n_r; ++n) {
        ch.h_ar[n] = rician_compose(g.ar, fading.rician_k, los_ar[n], nlos());
        ch.h_rb[n] = rician_compose(g.rb, fading.rician_k, los_rb[n], nlos());
        ch.h_re[n] = rician_compose(g.re, fading.rician_k, los_re[n], nlos());
    }
    return ch;
}

const char* node_name(Node n) {
    switch (n) {
        case Node::Alan: return "Alan";
        case Node::Bob: return "Bob";
        case Node::Rey: return "Rey";
        case Node::Eve: return "Eve";
    }
    return "?";
}

}  // namespace

Point2 NodeLayout::position(Node node) const {
    switch (node) {
        case Node::Alan: return alan;
        case Node::Bob: return bob;
        case Node::Rey: return rey;
        case Node::Eve: return eve;
    }
    throw std::invalid_argument("unknown node");
}

double NodeLayout::distance(Node a, Node b) const {
    const Point2 p = position(a);
    const Point2 q = position(b);
    return std::hypot(p.x - q.x, p.y - q.y);
}

void NodeLayout::validate() const {
    constexpr Node nodes[] = {Node::Alan, Node::Bob, Node::Rey, Node::Eve};
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            if (!(distance(nodes[i], nodes[j]) > 0.0)) {
                throw std::invalid_argument(std::string("layout: ") + node_name(nodes[i]) +
                                            " and " + node_name(nodes[j]) + " coincide");
            }
        }
    }
    if (std::abs(std::hypot(rey_array_axis.x, rey_array_axis.y) - 1.0) > 1e-9) {
        throw std::invalid_argument("layout: rey_array_axis must have unit norm");
    }
}

void FadingParams::validate() const {
    if (!(exp_direct > 0.0) || !(exp_ris > 0.0)) {
        throw std::invalid_argument("fading: path-loss exponents must be positive");
    }
    if (!(rician_k >= 0.0)) throw std::invalid_argument("fading: rician_k must be >= 0");
    if (!(element_spacing > 0.0)) {
        throw std::invalid_argument("fading: element_spacing must be positive");
    }
}

bool ChannelSet::finite() const {
    return std::isfinite(h_ab.real()) && std::isfinite(h_ab.imag()) &&
           std::isfinite(h_ae.real()) && std::isfinite(h_ae.imag()) && h_ar.allFinite() &&
           h_rb.allFinite() && h_re.allFinite();
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_index)
    : seed_(seed), stream_(stream_index), engine_(make_engine(seed, stream_index)) {}

cplx RngStream::complex_normal() {
    constexpr double s = std::numbers::sqrt2 / 2.0;
    const double re = normal_(engine_);
    const double im = normal_(engine_);
    return {s * re, s * im};
}

double path_loss_gain(double distance, double exponent, double ref_loss_db) {
    if (!(distance > 0.0)) throw std::domain_error("path_loss_gain: distance must be positive");
    return db_to_linear(ref_loss_db) * std::pow(distance, -exponent);
}

CVector los_steering(const NodeLayout& layout, Node endpoint, Eigen::Index n_elements,
                     double spacing) {
    if (endpoint == Node::Rey) throw std::domain_error("los_steering: endpoint must not be Rey");
    if (n_elements < 1) throw std::domain_error("los_steering: need at least one element");
    const Point2 r = layout.rey;
    const Point2 p = layout.position(endpoint);
    const double dist = std::hypot(p.x - r.x, p.y - r.y);
    if (!(dist > 0.0)) throw std::domain_error("los_steering: endpoint coincides with Rey");
    // Angle from broadside: sin(theta) is the projection on the array axis.
    const double sin_theta =
        ((p.x - r.x) * layout.rey_array_axis.x + (p.y - r.y) * layout.rey_array_axis.y) / dist;
    CVector a(n_elements);
    for (Eigen::Index n = 0; n < n_elements; ++n) {
        const double phase =
            2.0 * std::numbers::pi * spacing * static_cast<double>(n) * sin_theta;
        a[n] = std::polar(1.0, phase);
    }
    return a;
}

cplx draw_rayleigh(RngStream& rng, double gain) {
    if (!(gain >= 0.0)) throw std::domain_error("draw_rayleigh: gain must be >= 0");
    return std::sqrt(gain) * rng.complex_normal();
}

cplx draw_rician(RngStream& rng, double gain, double k, cplx los) {
    if (!(gain >= 0.0)) throw std::domain_error("draw_rician: gain must be >= 0");
    if (!(k >= 0.0)) throw std::domain_error("draw_rician: k must be >= 0");
    if (std::abs(std::abs(los) - 1.0) > 1e-9) {
        throw std::domain_error("draw_rician: LoS component must have unit modulus");
    }
    return rician_compose(gain, k, los, rng.complex_normal());
}

LinkGains link_gains(const NodeLayout& layout, const FadingParams& f) {
    return {
        path_loss_gain(layout.distance(Node::Alan, Node::Bob), f.exp_direct, f.ref_loss_db),
        path_loss_gain(layout.distance(Node::Alan, Node::Eve), f.exp_direct, f.ref_loss_db),
        path_loss_gain(layout.distance(Node::Alan, Node::Rey), f.exp_ris, f.ref_loss_db),
        path_loss_gain(layout.distance(Node::Rey, Node::Bob), f.exp_ris, f.ref_loss_db),
        path_loss_gain(layout.distance(Node::Rey, Node::Eve), f.exp_ris, f.ref_loss_db),
    };
}

ChannelSet generate_channels(const NodeLayout& layout, const FadingParams& fading,
                             Eigen::Index n_r, RngStream& rng) {
    if (n_r < 1) throw std::domain_error("generate_channels: n_r must be >= 1");
    return assemble(layout, fading, n_r, [&rng] { return rng.complex_normal(); });
}

ChannelSet los_only_channels(const NodeLayout& layout, const FadingParams& fading,
                             Eigen::Index n_r) {
    if (n_r < 1) throw std::domain_error("los_only_channels: n_r must be >= 1");
    return assemble(layout, fading, n_r, [] { return cplx{0.0, 0.0}; });
}

}  // namespace surveil
