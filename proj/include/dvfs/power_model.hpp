#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <dvfs/errors.hpp>

namespace dvfs {

// Internal units: hertz, volts, watts, seconds, joules.
inline constexpr double mhz = 1e6;
inline constexpr double milliwatt = 1e-3;
// 1 mW/MHz^3 expressed in W/Hz^3.
inline constexpr double mw_per_mhz3 = 1e-21;

struct FrequencyLevel {
    double hz = 0.0;
    double volts = 0.0;
    double watts = 0.0; // measured active power at this level
};

// Coefficients of the convex power law P(f) = alpha * f^3 + gamma.
struct CubicFit {
    double alpha_w_per_hz3 = 0.0;
    double gamma_w = 0.0;

    double power_at(double hz) const { return alpha_w_per_hz3 * hz * hz * hz + gamma_w; }
};

enum class PowerSource { CubicFit, Table };

// Least-squares fit of alpha*f^3 + gamma to a level table. If the
// unconstrained gamma comes out negative it is clamped to zero and alpha
// refit. A non-increasing power table makes alpha <= 0, which is rejected.
inline CubicFit fit_cubic(const std::vector<FrequencyLevel>& levels) {
    if (levels.size() < 2)
        throw validation_error("fit_cubic: need at least 2 levels");
    for (std::size_t i = 0; i + 1 < levels.size(); ++i)
        for (std::size_t j = i + 1; j < levels.size(); ++j)
            if (levels[i].hz == levels[j].hz)
                throw validation_error("fit_cubic: duplicate frequency in level table");

    const double n = static_cast<double>(levels.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& lv : levels) {
        const double x = lv.hz * lv.hz * lv.hz;
        sx += x;
        sy += lv.watts;
        sxx += x * x;
        sxy += x * lv.watts;
    }
    const double det = n * sxx - sx * sx;
    double alpha = (n * sxy - sx * sy) / det;
    double gamma = (sy - alpha * sx) / n;
    if (gamma < 0.0) {
        gamma = 0.0;
        alpha = sxy / sxx;
    }
    if (!(alpha > 0.0))
        throw validation_error("fit_cubic: power table is not increasing in frequency (alpha <= 0)");
    return CubicFit{alpha, gamma};
}

class ProcessorModel {
  public:
    ProcessorModel(std::string name, std::vector<FrequencyLevel> levels, double idle_w,
                   CubicFit fit, PowerSource source = PowerSource::CubicFit)
        : name_(std::move(name)),
          levels_(std::move(levels)),
          idle_w_(idle_w),
          fit_(fit),
          source_(source) {
        validate();
    }

    const std::string& name() const { return name_; }
    const std::vector<FrequencyLevel>& levels() const { return levels_; }
    std::size_t n_levels() const { return levels_.size(); }
    const FrequencyLevel& level(std::size_t i) const {
        if (i >= levels_.size())
            throw validation_error("level index out of range");
        return levels_[i];
    }
    double idle_power() const { return idle_w_; }
    const CubicFit& fit() const { return fit_; }
    PowerSource power_source() const { return source_; }

    double f_min() const { return levels_.front().hz; }
    double f_max() const { return levels_.back().hz; }

    // Active power at a discrete level, taken from the selected source.
    double active_power(std::size_t level_index) const {
        if (level_index >= levels_.size())
            throw validation_error("active_power: level index out of range");
        if (source_ == PowerSource::Table)
            return levels_[level_index].watts;
        return fit_.power_at(levels_[level_index].hz);
    }

    // Smallest level with frequency >= hz, or n_levels() when hz > f_max.
    std::size_t lowest_level_at_or_above(double hz) const {
        for (std::size_t i = 0; i < levels_.size(); ++i)
            if (levels_[i].hz >= hz)
                return i;
        return levels_.size();
    }

    ProcessorModel with_power_source(PowerSource s) const {
        return ProcessorModel(name_, levels_, idle_w_, fit_, s);
    }
    ProcessorModel with_idle_power(double idle_w) const {
        return ProcessorModel(name_, levels_, idle_w, fit_, source_);
    }

  private:
    void validate() const {
        if (levels_.size() < 2)
            throw validation_error("processor '" + name_ + "': need at least 2 frequency levels");
        for (const auto& lv : levels_) {
            if (!(lv.hz > 0.0) || !(lv.volts > 0.0) || !(lv.watts > 0.0))
                throw validation_error("processor '" + name_ +
                                       "': frequency, voltage and power must be positive");
        }
        for (std::size_t i = 0; i + 1 < levels_.size(); ++i) {
            if (!(levels_[i].hz < levels_[i + 1].hz))
                throw validation_error("processor '" + name_ +
                                       "': levels must be strictly ascending in frequency");
            if (!(levels_[i].volts < levels_[i + 1].volts))
                throw validation_error("processor '" + name_ +
                                       "': levels must be strictly ascending in voltage");
            if (!(levels_[i].watts < levels_[i + 1].watts))
                throw validation_error("processor '" + name_ +
                                       "': levels must be strictly ascending in power");
        }
        if (idle_w_ < 0.0)
            throw validation_error("processor '" + name_ + "': idle power must be nonnegative");
        const double lowest_active = (source_ == PowerSource::Table)
                                         ? levels_.front().watts
                                         : fit_.power_at(levels_.front().hz);
        if (idle_w_ > lowest_active)
            throw validation_error("processor '" + name_ +
                                   "': idle power exceeds lowest-level active power");
        if (!(fit_.alpha_w_per_hz3 > 0.0))
            throw validation_error("processor '" + name_ + "': cubic fit alpha must be positive");
        if (fit_.gamma_w < 0.0)
            throw validation_error("processor '" + name_ + "': cubic fit gamma must be nonnegative");
    }

    std::string name_;
    std::vector<FrequencyLevel> levels_;
    double idle_w_ = 0.0;
    CubicFit fit_;
    PowerSource source_ = PowerSource::CubicFit;
};

namespace presets {

// Transmeta Crusoe level table with the published convex-model coefficients.
inline ProcessorModel transmeta_crusoe(double idle_w = 0.0,
                                       PowerSource source = PowerSource::CubicFit) {
    std::vector<FrequencyLevel> levels{
        {300 * mhz, 1.2, 1.3},
        {400 * mhz, 1.225, 1.9},
        {533 * mhz, 1.35, 3.0},
        {600 * mhz, 1.5, 4.2},
        {667 * mhz, 1.6, 5.3},
    };
    CubicFit fit{1.94e-5 * mw_per_mhz3, 4.44 * milliwatt};
    return ProcessorModel("transmeta-crusoe", std::move(levels), idle_w, fit, source);
}

inline std::vector<FrequencyLevel> intel_xscale_levels() {
    return {
        {150 * mhz, 0.75, 0.08},
        {400 * mhz, 1.0, 0.17},
        {600 * mhz, 1.3, 0.4},
        {800 * mhz, 1.6, 0.9},
        {1000 * mhz, 1.8, 1.6},
    };
}

// Intel Xscale with the coefficients exactly as published.
inline ProcessorModel intel_xscale_paper(double idle_w = 0.0,
                                         PowerSource source = PowerSource::CubicFit) {
    CubicFit fit{1.55e-5 * mw_per_mhz3, 60 * milliwatt};
    return ProcessorModel("intel-xscale-paper", intel_xscale_levels(), idle_w, fit, source);
}

// Same table with the alpha exponent corrected so the curve tracks the
// measured powers (the published 1.55e-5 misses the table by about 10x).
inline ProcessorModel intel_xscale_corrected(double idle_w = 0.0,
                                             PowerSource source = PowerSource::CubicFit) {
    CubicFit fit{1.55e-6 * mw_per_mhz3, 60 * milliwatt};
    return ProcessorModel("intel-xscale-corrected", intel_xscale_levels(), idle_w, fit, source);
}

inline ProcessorModel by_name(const std::string& name, double idle_w = 0.0,
                              PowerSource source = PowerSource::CubicFit) {
    if (name == "transmeta-crusoe")
        return transmeta_crusoe(idle_w, source);
    if (name == "intel-xscale-paper")
        return intel_xscale_paper(idle_w, source);
    if (name == "intel-xscale-corrected")
        return intel_xscale_corrected(idle_w, source);
    throw validation_error("unknown processor preset '" + name + "'");
}

} // namespace presets

} // namespace dvfs
