#pragma once

// Chromatic processing of a single composite signal window: three overlapping
// triangular processor profiles (R, G, B), their weighted integrals against the
// signal, and the normalisation of those integrals into (x, y, z, L).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "heatchroma/error.hpp"

namespace heatchroma {

/// Default guard for |3L| below which a signature is undefined.
inline constexpr double kDefaultDegenerateEpsilon = 1e-9;

/// Uniformly sampled signal; sample k sits at k * sample_period.
struct SampledSignal {
    std::vector<double> values;
    double sample_period{1.0};

    double domain_length() const {
        return values.size() < 2 ? 0.0 : static_cast<double>(values.size() - 1) * sample_period;
    }
};

/// Symmetric triangle: peak_value at peak_position falling linearly to zero at +-half_width.
struct TriangleProfile {
    double peak_position{0.0}; // seconds, window-relative
    double half_width{1.0};    // seconds
    double peak_value{1.0};

    double operator()(double t) const {
        const double d = std::abs(t - peak_position) / half_width;
        return d >= 1.0 ? 0.0 : peak_value * (1.0 - d);
    }
};

enum class Processor : std::size_t { R = 0, G = 1, B = 2 };

class FilterBank {
  public:
    FilterBank(double domain_length, const std::array<TriangleProfile, 3>& profiles)
        : domain_length_(domain_length), profiles_(profiles) {
        if (!(domain_length > 0.0) || !std::isfinite(domain_length)) {
            throw Error(ErrorCode::NonPositiveWindow, "filter bank domain length must be > 0");
        }
        for (const auto& p : profiles_) {
            if (!(p.half_width > 0.0) || !(p.peak_value >= 0.0) || !std::isfinite(p.peak_position)) {
                throw Error(ErrorCode::InvalidConfig,
                            "triangle profiles need half_width > 0 and peak_value >= 0");
            }
        }
        // The summed response is piecewise linear, so checking every breakpoint is sufficient.
        for (double t : breakpoints()) {
            if (!(response_sum(t) > 0.0)) {
                throw Error(ErrorCode::InvalidConfig,
                            "filter bank does not cover the domain at t=" + std::to_string(t));
            }
        }
    }

    double domain_length() const { return domain_length_; }
    const std::array<TriangleProfile, 3>& profiles() const { return profiles_; }
    const TriangleProfile& profile(Processor p) const { return profiles_[static_cast<std::size_t>(p)]; }

    double response(Processor p, double t) const { return profile(p)(t); }
    double response_sum(double t) const {
        return profiles_[0](t) + profiles_[1](t) + profiles_[2](t);
    }

    /// Domain endpoints plus every profile corner inside the domain, sorted.
    std::vector<double> breakpoints() const {
        std::vector<double> pts{0.0, domain_length_};
        for (const auto& p : profiles_) {
            for (double c : {p.peak_position - p.half_width, p.peak_position, p.peak_position + p.half_width}) {
                if (c > 0.0 && c < domain_length_) pts.push_back(c);
            }
        }
        std::sort(pts.begin(), pts.end());
        return pts;
    }

  private:
    double domain_length_;
    std::array<TriangleProfile, 3> profiles_;
};

/// Partition-of-unity bank: peaks at 0, T/2 and T, half-width T/2, unit height.
inline FilterBank default_filter_bank(double window_length) {
    if (!(window_length > 0.0)) {
        throw Error(ErrorCode::NonPositiveWindow, "window length must be > 0");
    }
    const double half = window_length / 2.0;
    return FilterBank(window_length, {TriangleProfile{0.0, half, 1.0}, TriangleProfile{half, half, 1.0},
                                      TriangleProfile{window_length, half, 1.0}});
}

struct ProcessorOutputs {
    double r{0.0};
    double g{0.0};
    double b{0.0};

    double strength() const { return (r + g + b) / 3.0; }
};

struct ChromaticSignature {
    double r{0.0};
    double g{0.0};
    double b{0.0};
    double x{0.0};
    double y{0.0};
    double z{0.0};
    double l{0.0}; // signal strength index, (R + G + B) / 3
};

namespace detail {

// Exact integral of profile(t) * signal(t) over the linearly interpolated signal.
// Each sample interval is split at the profile corners so both factors are
// linear on every piece and Simpson's rule is exact for their product.
inline double weighted_integral(std::span<const double> values, double h, const TriangleProfile& profile) {
    const double corners[3] = {profile.peak_position - profile.half_width, profile.peak_position,
                               profile.peak_position + profile.half_width};
    const double support_lo = corners[0];
    const double support_hi = corners[2];
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < values.size(); ++k) {
        const double a = static_cast<double>(k) * h;
        const double b = static_cast<double>(k + 1) * h;
        if (b <= support_lo || a >= support_hi) continue;
        const double pa = values[k];
        const double slope = (values[k + 1] - pa) / h;
        auto product = [&](double t) { return profile(t) * (pa + slope * (t - a)); };

        double lo = a;
        for (double c : corners) {
            if (c > lo && c < b) {
                total += (c - lo) / 6.0 * (product(lo) + 4.0 * product(0.5 * (lo + c)) + product(c));
                lo = c;
            }
        }
        total += (b - lo) / 6.0 * (product(lo) + 4.0 * product(0.5 * (lo + b)) + product(b));
    }
    return total;
}

inline ChromaticSignature normalise(const ProcessorOutputs& p, double denominator) {
    ChromaticSignature s;
    s.r = p.r;
    s.g = p.g;
    s.b = p.b;
    s.l = p.strength();
    s.x = p.r / denominator;
    s.y = p.g / denominator;
    s.z = p.b / denominator;
    return s;
}

inline void require_nondegenerate(const ProcessorOutputs& p, double epsilon) {
    const double three_l = p.r + p.g + p.b;
    if (!(std::abs(three_l) >= epsilon) || !std::isfinite(three_l)) {
        throw Error(ErrorCode::DegenerateSignal,
                    "|3L| = " + std::to_string(std::abs(three_l)) + " is below the degenerate threshold");
    }
}

} // namespace detail

/// R, G and B processor integrals of the signal over the bank's domain.
inline ProcessorOutputs processor_outputs(const SampledSignal& signal, const FilterBank& bank) {
    if (signal.values.size() < 2) {
        throw Error(ErrorCode::TooFewSamples, "at least two samples are required");
    }
    if (!(signal.sample_period > 0.0)) {
        throw Error(ErrorCode::NonPositivePeriod, "sample period must be > 0");
    }
    const double domain = signal.domain_length();
    if (std::abs(domain - bank.domain_length()) > 1e-9 * std::max(1.0, bank.domain_length())) {
        throw Error(ErrorCode::DomainMismatch, "signal spans " + std::to_string(domain) +
                                                   " s but filter bank spans " +
                                                   std::to_string(bank.domain_length()) + " s");
    }
    const std::span<const double> v(signal.values);
    return ProcessorOutputs{detail::weighted_integral(v, signal.sample_period, bank.profile(Processor::R)),
                            detail::weighted_integral(v, signal.sample_period, bank.profile(Processor::G)),
                            detail::weighted_integral(v, signal.sample_period, bank.profile(Processor::B))};
}

/// x = R/3L, y = G/3L, z = B/3L.
inline ChromaticSignature xyz_original(const ProcessorOutputs& p,
                                       double epsilon = kDefaultDegenerateEpsilon) {
    detail::require_nondegenerate(p, epsilon);
    return detail::normalise(p, p.r + p.g + p.b);
}

/// x = R/|3L|, y = G/|3L|, z = B/|3L|; keeps the sign of L in the relative magnitudes
/// so composite windows dominated by negative contributions stay distinguishable.
inline ChromaticSignature xyz_modified(const ProcessorOutputs& p,
                                       double epsilon = kDefaultDegenerateEpsilon) {
    detail::require_nondegenerate(p, epsilon);
    return detail::normalise(p, std::abs(p.r + p.g + p.b));
}

} // namespace heatchroma
