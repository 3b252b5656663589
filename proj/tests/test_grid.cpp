#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>

#include "chtx/grid.hpp"
#include "chtx/initial_data.hpp"
#include "chtx/snapshot.hpp"

using namespace chtx;

namespace {

double max_interior_error(const Field& got, const std::function<double(double)>& exact) {
    const Grid& g = got.grid();
    double err = 0;
    for (std::size_t i = 1; i + 1 < g.count(0); ++i) {
        err = std::max(err, std::abs(got[i] - exact(g.coordinate(0, i))));
    }
    return err;
}

double max_error(const Field& got, const std::function<double(double)>& exact) {
    const Grid& g = got.grid();
    double err = 0;
    for (std::size_t i = 0; i < g.count(0); ++i) err = std::max(err, std::abs(got[i] - exact(g.coordinate(0, i))));
    return err;
}

std::vector<Grid> test_grids() {
    return {Grid::interval(1.0, 33), Grid::interval(2.5, 64), Grid::rectangle(1.0, 2.0, 17, 23),
            Grid::rectangle(0.5, 0.5, 32, 32)};
}

}  // namespace

TEST_SUITE("grid") {

TEST_CASE("grid geometry") {
    const Grid g = Grid::rectangle(1.0, 2.0, 11, 21);
    CHECK(g.size() == 231);
    CHECK(g.spacing(0) == doctest::Approx(0.1));
    CHECK(g.spacing(1) == doctest::Approx(0.1));
    CHECK(g.measure() == 2.0);
    CHECK(g.stride(0) == 21);
    CHECK(g.stride(1) == 1);
    CHECK(g.index(2, 3) == 45);
    CHECK(g.coordinate(1, 20) == doctest::Approx(2.0));
    CHECK(g.weight_factor(0) == 0.25);
    CHECK(g.weight_factor(g.index(0, 5)) == 0.5);
    CHECK(g.weight_factor(g.index(5, 5)) == 1.0);
    CHECK_THROWS_AS(Grid::interval(1.0, 7), std::invalid_argument);
    CHECK_THROWS_AS(Grid::interval(-1.0, 16), std::invalid_argument);
    CHECK_THROWS_AS(Grid(3, {1, 1}, {8, 8}), std::invalid_argument);
}

TEST_CASE("laplacian examples") {
    const Grid g = Grid::interval(1.0, 65);
    CHECK(laplacian_neumann(Field(g, 5.0)).linf() == 0.0);

    const Field quad = Field::from_function(g, [](double x, double) { return x * x; });
    const Field lap = laplacian_neumann(quad);
    for (std::size_t i = 1; i + 1 < g.count(0); ++i) CHECK(lap[i] == doctest::Approx(2.0).epsilon(1e-9));

    const Grid r = Grid::rectangle(1.0, 1.0, 17, 17);
    CHECK(laplacian_neumann(Field(r, -3.0)).linf() == 0.0);
}

TEST_CASE("laplacian converges at second order on cos(pi x)") {
    auto error_at = [](std::size_t n) {
        const Grid g = Grid::interval(1.0, n);
        const Field phi = Field::from_function(g, [](double x, double) { return std::cos(M_PI * x); });
        return max_error(laplacian_neumann(phi), [](double x) { return -M_PI * M_PI * std::cos(M_PI * x); });
    };
    const double e64 = error_at(64);
    const double e128 = error_at(128);
    CHECK(std::log(e64 / e128) / std::log(127.0 / 63.0) >= 1.9);
}

TEST_CASE("quadrature examples") {
    CHECK(integrate(Field(Grid::interval(1.0, 33), 1.0)) == 1.0);
    CHECK(integrate(Field(Grid::rectangle(1.0, 2.0, 9, 13), 1.0)) == 2.0);
    const Grid g = Grid::interval(1.0, 256);
    const Field s = Field::from_function(g, [](double x, double) { return std::sin(M_PI * x); });
    CHECK(std::abs(integrate(s) - 2.0 / M_PI) < 1e-4);
    // Exact on per-axis affine fields.
    const Grid r = Grid::rectangle(1.0, 2.0, 9, 13);
    const Field affine = Field::from_function(r, [](double x, double y) { return 1 + 2 * x + 3 * y + x * y; });
    CHECK(integrate(affine) == doctest::Approx(2 + 2 * 1 + 3 * 2 + 1).epsilon(1e-14));

    CHECK(integrate_power(Field(Grid::interval(1.0, 16), 2.0), 3.0) == 8.0);
    CHECK(integrate_power(Field(Grid::rectangle(1.0, 3.0, 8, 8), 1.0), 2.7) == doctest::Approx(3.0).epsilon(1e-15));
    const Field x = Field::from_function(g, [](double x, double) { return x; });
    CHECK(std::abs(integrate_power(x, 2.0) - 1.0 / 3.0) < 1e-4);

    Field neg(Grid::interval(1.0, 16), 1.0);
    neg[3] = -1e-3;
    CHECK_THROWS_AS(integrate_power(neg, 2.0), PositivityError);
}

TEST_CASE("taxis divergence examples") {
    const Grid g = Grid::interval(1.0, 128);
    const Field u = Field::from_function(g, [](double x, double) { return 1 + x; });
    CHECK(taxis_divergence(u, Field(g, 4.0)).linf() == 0.0);

    const Field s = Field::from_function(g, [](double x, double) { return std::cos(3 * x) + x * x; });
    const Field c = taxis_divergence(Field(g, 2.5), s);
    const Field lap = laplacian_neumann(s);
    for (std::size_t p = 0; p < g.size(); ++p) CHECK(c[p] == doctest::Approx(2.5 * lap[p]).epsilon(1e-12));

    auto error_at = [](std::size_t n) {
        const Grid h = Grid::interval(1.0, n);
        const Field uu = Field::from_function(h, [](double x, double) { return 1 + x; });
        const Field ss = Field::from_function(h, [](double x, double) { return x * x; });
        return max_interior_error(taxis_divergence(uu, ss), [](double x) { return 2 + 4 * x; });
    };
    CHECK(error_at(128) < 1e-8);
    CHECK_THROWS_AS(taxis_divergence(u, Field(Grid::interval(1.0, 64), 0.0)), std::invalid_argument);
}

TEST_CASE("taxis divergence is second order on a manufactured flux") {
    // u = 2 + cos(πx), s = cos(πx): zero flux at both ends.
    auto error_at = [](std::size_t n) {
        const Grid h = Grid::interval(1.0, n);
        const Field uu = Field::from_function(h, [](double x, double) { return 2 + std::cos(M_PI * x); });
        const Field ss = Field::from_function(h, [](double x, double) { return std::cos(M_PI * x); });
        return max_error(taxis_divergence(uu, ss), [](double x) {
            const double c = std::cos(M_PI * x);
            const double s = std::sin(M_PI * x);
            return M_PI * M_PI * (s * s - (2 + c) * c);
        });
    };
    CHECK(std::log(error_at(64) / error_at(128)) / std::log(127.0 / 63.0) >= 1.9);
}

TEST_CASE("gradient energy of half powers") {
    const Grid g = Grid::interval(1.0, 256);
    CHECK(grad_half_power_norm(Field(g, 3.0), 4.0) == 0.0);
    const Field x = Field::from_function(g, [](double x, double) { return x; });
    CHECK(std::abs(grad_half_power_norm(x, 2.0) - 1.0) < 1e-6);
    CHECK(std::abs(grad_half_power_norm(x, 4.0) - 4.0 / 3.0) < 1e-3);
    Field neg = x;
    neg[5] = -0.1;
    CHECK_THROWS_AS(grad_half_power_norm(neg, 2.0), PositivityError);
}

TEST_CASE("operator identities on random fields") {
    for (const Grid& g : test_grids()) {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const Field phi = random_cosine_field(g, seed, 6);
            const Field psi = random_cosine_field(g, seed + 100, 6);
            const Field lphi = laplacian_neumann(phi);
            const Field lpsi = laplacian_neumann(psi);
            const double scale = std::max(1.0, lphi.linf()) * g.measure();
            CHECK(std::abs(integrate(lphi)) <= 1e-12 * scale);
            const double lhs = weighted_dot(lphi, psi);
            const double rhs = weighted_dot(phi, lpsi);
            CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));

            Field u = perturbed_constant(g, 1.0, 0.9, seed + 7, 6);
            Field neg_psi = psi;
            for (auto& v : neg_psi.values()) v = -v;
            const Field t1 = taxis_divergence(u, psi);
            const Field t2 = taxis_divergence(u, neg_psi);
            for (std::size_t p = 0; p < g.size(); ++p) REQUIRE(t2[p] == -t1[p]);
            CHECK(std::abs(integrate(t1)) <= 1e-12 * std::max(1.0, t1.linf()) * g.measure());
            const Field up = taxis_divergence(u, psi, FaceValue::Upwind);
            CHECK(std::abs(integrate(up)) <= 1e-12 * std::max(1.0, up.linf()) * g.measure());
        }
    }
}

TEST_CASE("integration is independent of summation order effects") {
    const Grid g = Grid::rectangle(1.0, 1.0, 64, 64);
    const Field phi = random_cosine_field(g, 3, 5);
    CHECK(integrate(phi) == integrate(phi));
    Field copy(g, phi.values());
    CHECK(integrate(copy) == integrate(phi));
}

TEST_CASE("field helpers") {
    const Grid g = Grid::interval(1.0, 16);
    Field f(g, 1.0);
    f[3] = -2.0;
    CHECK(f.min() == -2.0);
    CHECK(f.max() == 1.0);
    CHECK(f.linf() == 2.0);
    f[4] = std::numeric_limits<double>::quiet_NaN();
    CHECK_FALSE(f.all_finite());
    CHECK(std::isinf(f.linf()));

    Field small(g, 1.0);
    small[2] = -1e-14;
    const Field pp = positive_part(small, 1e-12);
    CHECK(pp[2] == 0.0);
    CHECK_THROWS_AS(positive_part(small, 1e-15), PositivityError);
    CHECK_THROWS_AS(Field(g, std::vector<double>(3, 0.0)), std::invalid_argument);
}

TEST_CASE("snapshot round trip and layout") {
    const Grid g = Grid::rectangle(1.5, 0.75, 9, 12);
    const Field f = random_cosine_field(g, 11);
    const auto bytes = encode_snapshot(f);
    REQUIRE(bytes.size() == 5 + 1 + 2 * 4 + 2 * 8 + g.size() * 8);
    CHECK(std::string(bytes.begin(), bytes.begin() + 5) == "CHTX1");
    CHECK(bytes[5] == 2);
    CHECK(bytes[6] == 9);
    CHECK(bytes[7] == 0);
    CHECK(bytes[10] == 12);
    const Field back = decode_snapshot(bytes);
    CHECK(back == f);

    auto bad = bytes;
    bad[0] = 'X';
    CHECK_THROWS_AS(decode_snapshot(bad), SnapshotError);
    auto truncated = bytes;
    truncated.pop_back();
    CHECK_THROWS_AS(decode_snapshot(truncated), SnapshotError);
    auto trailing = bytes;
    trailing.push_back(0);
    CHECK_THROWS_AS(decode_snapshot(trailing), SnapshotError);

    const auto path = std::filesystem::temp_directory_path() / "chtx_grid_test.chtx";
    write_snapshot(path, f);
    CHECK(read_snapshot(path) == f);
    std::filesystem::remove(path);
}

}  // TEST_SUITE
