#include <catch2/catch_amalgamated.hpp>

#include <dvfs/power_model.hpp>

#include "support.hpp"

using namespace dvfs;
using Catch::Approx;

namespace {

double ssr(const std::vector<FrequencyLevel>& levels, double alpha, double gamma) {
    double s = 0.0;
    for (const auto& lv : levels) {
        const double r = alpha * lv.hz * lv.hz * lv.hz + gamma - lv.watts;
        s += r * r;
    }
    return s;
}

} // namespace

TEST_CASE("fit_cubic matches the closed-form least-squares solution") {
    const auto levels = presets::transmeta_crusoe().levels();
    const auto fit = fit_cubic(levels);

    // frozen from the normal equations on the Transmeta table
    CHECK(fit.alpha_w_per_hz3 / mw_per_mhz3 == Approx(1.48662023e-5).epsilon(1e-6));
    CHECK(fit.gamma_w / milliwatt == Approx(894.726546).epsilon(1e-6));

    SECTION("perturbing the coefficients never reduces the residual") {
        const double base = ssr(levels, fit.alpha_w_per_hz3, fit.gamma_w);
        for (double da : {-0.01, 0.0, 0.01}) {
            for (double dg : {-0.01, 0.0, 0.01}) {
                if (da == 0.0 && dg == 0.0)
                    continue;
                const double s = ssr(levels, fit.alpha_w_per_hz3 * (1 + da),
                                     fit.gamma_w * (1 + dg));
                CHECK(s >= base);
            }
        }
    }
}

TEST_CASE("fit_cubic interpolates two points exactly") {
    const double gamma0 = 0.37;
    std::vector<FrequencyLevel> levels{
        {1.0, 1.0, 1.0 + gamma0},
        {2.0, 2.0, 8.0 + gamma0},
    };
    const auto fit = fit_cubic(levels);
    CHECK(fit.alpha_w_per_hz3 == Approx(1.0).margin(1e-12));
    CHECK(fit.gamma_w == Approx(gamma0).margin(1e-12));
}

TEST_CASE("fit_cubic rejects degenerate inputs") {
    std::vector<FrequencyLevel> one{{1.0, 1.0, 1.0}};
    CHECK_THROWS_AS(fit_cubic(one), validation_error);

    std::vector<FrequencyLevel> flat{{1.0, 1.0, 2.0}, {2.0, 1.1, 2.0}, {3.0, 1.2, 2.0}};
    CHECK_THROWS_AS(fit_cubic(flat), validation_error);
}

TEST_CASE("active_power honors the power source") {
    const auto table = presets::transmeta_crusoe(0.0, PowerSource::Table);
    CHECK(table.active_power(3) == Approx(4.2)); // 600 MHz row
    CHECK(table.active_power(0) == Approx(1.3));

    const auto fit = presets::transmeta_crusoe(0.0, PowerSource::CubicFit);
    // paper coefficients at 600 MHz: 1.94e-5 * 600^3 + 4.44 mW
    CHECK(fit.active_power(3) == Approx(4.19484).epsilon(1e-9));

    CHECK_THROWS_AS(table.active_power(5), validation_error);
}

TEST_CASE("power is strictly increasing across levels under both sources") {
    for (const char* name : {"transmeta-crusoe", "intel-xscale-paper", "intel-xscale-corrected"}) {
        for (PowerSource src : {PowerSource::CubicFit, PowerSource::Table}) {
            const auto model = presets::by_name(name, 0.0, src);
            for (std::size_t i = 0; i + 1 < model.n_levels(); ++i) {
                CHECK(model.active_power(i) > 0.0);
                CHECK(model.active_power(i) < model.active_power(i + 1));
            }
        }
    }
}

TEST_CASE("presets carry the published tables") {
    const auto tm = presets::transmeta_crusoe();
    REQUIRE(tm.n_levels() == 5);
    CHECK(tm.f_max() == 667 * mhz);
    CHECK(tm.f_min() == 300 * mhz);

    const auto ix = presets::intel_xscale_corrected();
    // cubic at 800 MHz: 1.55e-6 * 800^3 + 60 mW, close to the 0.9 W table row
    CHECK(ix.fit().power_at(800 * mhz) == Approx(0.8536).epsilon(1e-9));
}

TEST_CASE("model validation rejects invariant violations") {
    const CubicFit fit{1e-27, 0.0};
    std::vector<FrequencyLevel> unordered{{400 * mhz, 1.1, 0.2}, {300 * mhz, 1.0, 0.1}};
    CHECK_THROWS_AS(ProcessorModel("bad", unordered, 0.0, fit), validation_error);

    std::vector<FrequencyLevel> nonpositive{{300 * mhz, 1.0, 0.1}, {400 * mhz, -1.0, 0.2}};
    CHECK_THROWS_AS(ProcessorModel("bad", nonpositive, 0.0, fit), validation_error);

    std::vector<FrequencyLevel> ok{{300 * mhz, 1.0, 0.1}, {400 * mhz, 1.1, 0.2}};
    CHECK_THROWS_AS(ProcessorModel("bad", ok, 0.5, fit, PowerSource::Table), validation_error);
}
