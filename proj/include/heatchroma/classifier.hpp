#pragma once

// Nearest-centroid classification of chromatic signatures on the x-L plane.
// L is divided by a scaling factor (by default the standard deviation of the
// training L values) so both axes are dimensionless.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "heatchroma/chromatic.hpp"
#include "heatchroma/error.hpp"
#include "heatchroma/kinds.hpp"

namespace heatchroma {

struct LabeledSignature {
    ChromaticSignature signature;
    EventKind kind;
};

struct ClassCluster {
    EventKind kind{EventKind::Case1};
    double centroid_x{0.0};
    double centroid_l{0.0}; // in signal-seconds, not scaled
    double spread{0.0};     // std of scaled distances to the centroid
};

class ClusterModel {
  public:
    ClusterModel() = default;

    ClusterModel(std::vector<ClassCluster> classes, double l_scaling)
        : classes_(std::move(classes)), l_scaling_(l_scaling) {
        if (classes_.empty()) throw Error(ErrorCode::InvalidConfig, "cluster model needs at least one class");
        if (!(l_scaling_ > 0.0) || !std::isfinite(l_scaling_)) {
            throw Error(ErrorCode::InvalidConfig, "L scaling must be > 0");
        }
        std::sort(classes_.begin(), classes_.end(),
                  [](const ClassCluster& a, const ClassCluster& b) { return a.kind < b.kind; });
        for (std::size_t i = 0; i < classes_.size(); ++i) {
            if (!(classes_[i].spread >= 0.0)) throw Error(ErrorCode::InvalidConfig, "spread must be >= 0");
            if (i > 0 && classes_[i].kind == classes_[i - 1].kind) {
                throw Error(ErrorCode::InvalidConfig,
                            "duplicate class " + std::string(to_string(classes_[i].kind)));
            }
        }
    }

    bool calibrated() const { return !classes_.empty(); }
    const std::vector<ClassCluster>& classes() const { return classes_; }
    double l_scaling() const { return l_scaling_; }

    /// Distance in the scaled (x, L / scaling) plane.
    double distance(double x, double l, const ClassCluster& c) const {
        return std::hypot(x - c.centroid_x, (l - c.centroid_l) / l_scaling_);
    }

    const ClassCluster* find(EventKind k) const {
        for (const auto& c : classes_) {
            if (c.kind == k) return &c;
        }
        return nullptr;
    }

  private:
    std::vector<ClassCluster> classes_;
    double l_scaling_{1.0};
};

/// Population standard deviation of training L values, or 1 when they coincide.
inline double default_l_scaling(std::span<const LabeledSignature> samples) {
    if (samples.empty()) return 1.0;
    double mean = 0.0;
    for (const auto& s : samples) mean += s.signature.l;
    mean /= static_cast<double>(samples.size());
    double ss = 0.0;
    for (const auto& s : samples) ss += (s.signature.l - mean) * (s.signature.l - mean);
    const double sd = std::sqrt(ss / static_cast<double>(samples.size()));
    return sd > 0.0 && std::isfinite(sd) ? sd : 1.0;
}

inline constexpr std::size_t kMinSamplesPerClass = 3;

inline ClusterModel calibrate(std::span<const LabeledSignature> samples,
                              std::optional<double> l_scaling = std::nullopt) {
    std::array<std::vector<const ChromaticSignature*>, 4> by_kind;
    for (const auto& s : samples) by_kind[index_of(s.kind)].push_back(&s.signature);

    for (EventKind k : kAllEventKinds) {
        const auto count = by_kind[index_of(k)].size();
        if (count > 0 && count < kMinSamplesPerClass) {
            throw Error(ErrorCode::InsufficientSamples, "class " + std::string(to_string(k)) + " has " +
                                                            std::to_string(count) + " samples, needs " +
                                                            std::to_string(kMinSamplesPerClass));
        }
    }
    if (samples.empty()) throw Error(ErrorCode::InsufficientSamples, "no labelled signatures to calibrate on");

    const double scaling = l_scaling.value_or(default_l_scaling(samples));
    std::vector<ClassCluster> classes;
    for (EventKind k : kAllEventKinds) {
        const auto& members = by_kind[index_of(k)];
        if (members.empty()) continue;
        const double n = static_cast<double>(members.size());
        ClassCluster c{k, 0.0, 0.0, 0.0};
        for (const auto* s : members) {
            c.centroid_x += s->x;
            c.centroid_l += s->l;
        }
        c.centroid_x /= n;
        c.centroid_l /= n;

        std::vector<double> d;
        d.reserve(members.size());
        for (const auto* s : members) d.push_back(std::hypot(s->x - c.centroid_x, (s->l - c.centroid_l) / scaling));
        double mean_d = 0.0;
        for (double v : d) mean_d += v;
        mean_d /= n;
        double ss = 0.0;
        for (double v : d) ss += (v - mean_d) * (v - mean_d);
        c.spread = std::sqrt(ss / n);
        classes.push_back(c);
    }
    return ClusterModel(std::move(classes), scaling);
}

struct Classification {
    EventKind kind{EventKind::Case1};
    double margin{0.0}; // (d2 - d1) / (d2 + d1); 1 for a single-class model
};

inline Classification classify(const ChromaticSignature& sig, const ClusterModel& model) {
    if (!model.calibrated()) throw Error(ErrorCode::UncalibratedModel, "cluster model has not been calibrated");
    double d1 = std::numeric_limits<double>::infinity();
    double d2 = std::numeric_limits<double>::infinity();
    EventKind best = model.classes().front().kind;
    // Classes are stored in kind order, so strict comparison keeps the earlier class on ties.
    for (const auto& c : model.classes()) {
        const double d = model.distance(sig.x, sig.l, c);
        if (d < d1) {
            d2 = d1;
            d1 = d;
            best = c.kind;
        } else if (d < d2) {
            d2 = d;
        }
    }
    if (model.classes().size() == 1) return {best, 1.0};
    const double denom = d1 + d2;
    return {best, denom > 0.0 ? (d2 - d1) / denom : 0.0};
}

struct Separability {
    double min_centroid_distance{std::numeric_limits<double>::infinity()};
    double max_spread{0.0};

    /// Passes when clusters sit more than `factor` spreads apart.
    bool separated(double factor) const { return min_centroid_distance > factor * max_spread; }
};

inline Separability separability(const ClusterModel& model) {
    Separability s;
    const auto& cs = model.classes();
    for (std::size_t i = 0; i < cs.size(); ++i) {
        s.max_spread = std::max(s.max_spread, cs[i].spread);
        for (std::size_t j = i + 1; j < cs.size(); ++j) {
            s.min_centroid_distance =
                std::min(s.min_centroid_distance, model.distance(cs[i].centroid_x, cs[i].centroid_l, cs[j]));
        }
    }
    return s;
}

} // namespace heatchroma
