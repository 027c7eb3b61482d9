#include <doctest.h>

#include "nsdamp/error.hpp"
#include "nsdamp/spectral_ops.hpp"
#include "test_support.hpp"

using namespace nsdamp;
using namespace nsdamp::test;

namespace {

// Direct O(N^2) DFT with the library's normalization, sqrt(V)/N * sum f e^{-i k.x}.
Complex brute_dft(const PhysicalField& f, int c, const std::array<int, 3>& k) {
    const Grid& g = f.grid();
    Complex acc{0.0, 0.0};
    for (std::size_t p = 0; p < g.size(); ++p) {
        const auto idx = g.unflatten(p);
        double phase = 0.0;
        for (int j = 0; j < g.dim(); ++j) phase += k[j] * g.coordinate(idx[j]) * g.wavenumber_unit();
        acc += f.at(c, p) * std::polar(1.0, -phase);
    }
    return acc * std::sqrt(g.volume()) / static_cast<double>(g.size());
}

SpectralField random_spectral(const Grid& grid, int components, std::uint64_t seed) {
    return forward_transform(random_physical(grid, components, seed));
}

}  // namespace

TEST_CASE("grid validation and lattice") {
    CHECK_THROWS_AS(Grid(1, 8), ValidationError);
    CHECK_THROWS_AS(Grid(3, 7), ValidationError);
    CHECK_THROWS_AS(Grid(2, 2), ValidationError);
    CHECK_THROWS_AS(Grid(2, 8, -1.0), ValidationError);

    const Grid g(3, 8);
    CHECK(g.size() == 512);
    CHECK(g.frequency(4) == 4);
    CHECK(g.frequency(5) == -3);
    const auto m = g.mode_of({1, -2, 3});
    CHECK(g.mirror(m) == g.mode_of({-1, 2, -3}));
    CHECK(g.k_sq(m) == 14);
    const auto nyq = g.mode_of({4, 1, 0});
    CHECK(g.on_nyquist(nyq));
    CHECK(g.xi(0, nyq) == 0.0);
    CHECK(g.xi_sq(nyq) == doctest::Approx(17.0));
    CHECK(g.dealias_kept(g.mode_of({2, 0, 0})));
    CHECK_FALSE(g.dealias_kept(g.mode_of({2, 2, 0})));
}

TEST_CASE("forward transform") {
    SUBCASE("zero field") {
        const Grid g(3, 8);
        CHECK(forward_transform(PhysicalField(g, 3)).max_abs() == 0.0);
    }
    SUBCASE("cos x1 has exactly two modes") {
        const Grid g(3, 8);
        const auto u = cos_x1(g);
        const double half = std::sqrt(g.volume()) / 2.0;
        const auto plus = g.mode_of({1, 0, 0});
        const auto minus = g.mode_of({-1, 0, 0});
        for (int c = 0; c < 3; ++c)
            for (std::size_t m = 0; m < u.modes(); ++m) {
                const double want = (c == 0 && (m == plus || m == minus)) ? half : 0.0;
                CHECK(std::abs(u.at(c, m) - want) <= 1e-13 * half);
            }
    }
    SUBCASE("matches a direct DFT") {
        const Grid g(2, 8, 3.0);
        const auto f = random_physical(g, 2, 11);
        const auto u = forward_transform(f);
        double err = 0.0;
        for (std::size_t m = 0; m < g.size(); ++m) {
            const auto idx = g.unflatten(m);
            const std::array<int, 3> k{g.frequency(idx[0]), g.frequency(idx[1]), 0};
            for (int c = 0; c < 2; ++c) err = std::max(err, std::abs(u.at(c, m) - brute_dft(f, c, k)));
        }
        CHECK(err <= 1e-12);
    }
    SUBCASE("Parseval against direct quadrature") {
        for (int dim : {2, 3}) {
            const Grid g(dim, 16, 5.0);
            const auto f = random_physical(g, dim, 7 + dim);
            double quad = 0.0;
            for (double v : f.data()) quad += v * v;
            quad *= g.cell_volume();
            double coeff = 0.0;
            const auto u = forward_transform(f);
            for (const auto& c : u.data()) coeff += std::norm(c);
            CHECK(std::abs(coeff - quad) <= 1e-12 * quad);
        }
    }
    SUBCASE("output is Hermitian") {
        const Grid g(3, 8);
        CHECK(random_spectral(g, 3, 5).hermitian_defect() == 0.0);
    }
    SUBCASE("non-finite input names the offending index") {
        const Grid g(2, 8);
        PhysicalField f(g, 2);
        f.at(1, g.flatten({2, 1, 0})) = std::nan("");
        try {
            forward_transform(f);
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            const std::string msg = e.what();
            CHECK(msg.find("component 1") != std::string::npos);
            CHECK(msg.find("(2, 1)") != std::string::npos);
        }
    }
}

TEST_CASE("inverse transform") {
    SUBCASE("zero coefficients") {
        const Grid g(2, 8);
        CHECK(inverse_transform(SpectralField(g, 2)).max_abs() == 0.0);
    }
    SUBCASE("single Hermitian pair gives cos x1") {
        const Grid g(3, 8);
        SpectralField u(g, 3);
        const double half = std::sqrt(g.volume()) / 2.0;
        u.at(0, g.mode_of({1, 0, 0})) = half;
        u.at(0, g.mode_of({-1, 0, 0})) = half;
        const auto f = inverse_transform(u);
        const auto want = sample(g, 3, [](int c, const auto& x) { return c == 0 ? std::cos(x[0]) : 0.0; });
        CHECK(max_abs_diff(f.data(), want.data()) <= 1e-12);
    }
    SUBCASE("round trip") {
        for (int dim : {2, 3}) {
            const Grid g(dim, 16);
            const auto f = random_physical(g, dim, 3);
            const auto back = inverse_transform(forward_transform(f));
            CHECK(max_abs_diff(back.data(), f.data()) <= 1e-12);
        }
    }
    SUBCASE("broken Hermitian symmetry is rejected") {
        const Grid g(2, 8);
        SpectralField u(g, 2);
        u.at(0, g.mode_of({1, 0, 0})) = Complex(1.0, 0.0);
        CHECK_THROWS_AS(inverse_transform(u), ValidationError);
    }
}

TEST_CASE("strict mode is deterministic across policies") {
    const Grid g(3, 16);
    const auto f = random_physical(g, 3, 99);
    set_execution_policy({1, true});
    const auto a = forward_transform(f);
    set_execution_policy({1, true});
    const auto b = forward_transform(f);
    CHECK(a == b);
}

TEST_CASE("Leray projection") {
    const Grid g(3, 8);
    SUBCASE("explicit multiplier") {
        SpectralField u(g, 3);
        const auto m = g.mode_of({1, 0, 0});
        const auto mm = g.mirror(m);
        u.at(0, m) = u.at(0, mm) = 1.0;
        u.at(1, m) = u.at(1, mm) = 1.0;
        const auto p = leray_project(u);
        CHECK(std::abs(p.at(0, m)) == 0.0);
        CHECK(p.at(1, m) == Complex(1.0, 0.0));
        CHECK(p.at(2, m) == Complex(0.0, 0.0));
        CHECK(p.divergence_free());
    }
    SUBCASE("idempotent") {
        const auto p = leray_project(random_spectral(g, 3, 1));
        const auto pp = leray_project(p);
        double err = 0.0;
        for (std::size_t i = 0; i < p.data().size(); ++i) err = std::max(err, std::abs(pp.data()[i] - p.data()[i]));
        CHECK(err <= 1e-14 * p.max_abs());
    }
    SUBCASE("annihilates gradients") {
        const auto phi = random_spectral(g, 1, 2);
        const auto grad = spectral_gradient(phi);  // components d_j phi
        CHECK(leray_project(grad).max_abs() <= 1e-12 * grad.max_abs());
    }
    SUBCASE("zero mode passes through") {
        SpectralField u(g, 3);
        u.at(2, 0) = 4.0;
        CHECK(leray_project(u).at(2, 0) == Complex(4.0, 0.0));
    }
    SUBCASE("output is divergence free") {
        const auto u = random_spectral(g, 3, 3);
        const auto d = divergence(leray_project(u));
        CHECK(d.max_abs() <= 1e-12 * std::sqrt(l2_norm_sq(u)));
        CHECK(max_relative_divergence(leray_project(u)) <= 1e-12);
    }
}

TEST_CASE("Friedrichs truncation") {
    const Grid g(3, 8);
    auto u = random_spectral(g, 3, 4);
    CHECK_THROWS_AS(friedrichs_truncate(u, 0.0), ValidationError);
    CHECK(friedrichs_truncate(u, g.max_xi() * 1.01) == u);
    remove_mean(u);
    CHECK(friedrichs_truncate(u, 0.5).max_abs() == 0.0);
    const auto c = cos_x1(g);
    CHECK(friedrichs_truncate(c, 1.5) == c);
}

TEST_CASE("differential operators") {
    const Grid g(3, 16);
    SUBCASE("gradient of a constant") {
        SpectralField k(g, 1);
        k.at(0, 0) = 3.0;
        CHECK(spectral_gradient(k).max_abs() == 0.0);
    }
    SUBCASE("d1 cos x1 = -sin x1") {
        const auto du = inverse_transform(spectral_gradient(cos_x1(g)));
        const auto want = sample(g, 9, [](int c, const auto& x) { return c == 0 ? -std::sin(x[0]) : 0.0; });
        CHECK(max_abs_diff(du.data(), want.data()) <= 1e-12);
    }
    SUBCASE("Lap cos x1 = -cos x1") {
        const auto lu = inverse_transform(laplacian(cos_x1(g)));
        const auto want = sample(g, 3, [](int c, const auto& x) { return c == 0 ? -std::cos(x[0]) : 0.0; });
        CHECK(max_abs_diff(lu.data(), want.data()) <= 1e-12);
    }
    SUBCASE("divergence of a single mode") {
        SpectralField u(g, 3);
        u.at(0, g.mode_of({1, 0, 0})) = 1.0;
        CHECK(divergence(u).at(0, g.mode_of({1, 0, 0})) == Complex(0.0, 1.0));
        CHECK(divergence(SpectralField(g, 3)).max_abs() == 0.0);
    }
    SUBCASE("Nyquist entries of the gradient vanish") {
        const auto grad = spectral_gradient(random_spectral(g, 1, 8));
        CHECK(grad.at(0, g.mode_of({8, 1, 0})) == Complex(0.0, 0.0));
        CHECK(grad.hermitian_defect() == 0.0);
    }
}

TEST_CASE("Sobolev norms") {
    const Grid g(3, 16);
    const auto u = random_spectral(g, 3, 21);
    CHECK(std::abs(sobolev_norm(u, 0.0, false) - std::sqrt(l2_norm_sq(u))) <= 1e-14 * std::sqrt(l2_norm_sq(u)));

    const auto c = cos_x1(g);
    const double l2 = std::sqrt(l2_norm_sq(c));
    for (double s : {-1.0, 0.5, 1.0, 2.0}) CHECK(std::abs(sobolev_norm(c, s, true) - l2) <= 1e-12 * l2);

    auto v = random_spectral(g, 3, 22);
    remove_mean(v);
    zero_nyquist(v);
    const double h1 = sobolev_norm(v, 1.0, true);
    const double grad_sq = l2_norm_sq(spectral_gradient(v));
    CHECK(std::abs(grad_sq - h1 * h1) <= 1e-12 * grad_sq);

    CHECK_THROWS_AS(sobolev_norm(u, -1.0, true), ValidationError);
}

TEST_CASE("inner product matches grid quadrature") {
    const Grid g(2, 16, 4.0);
    const auto a = random_physical(g, 2, 1);
    const auto b = random_physical(g, 2, 2);
    double quad = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) quad += a.data()[i] * b.data()[i];
    quad *= g.cell_volume();
    CHECK(inner_product(forward_transform(a), forward_transform(b)) == doctest::Approx(quad).epsilon(1e-12));
}

TEST_CASE("dealiasing keeps the two-thirds ball") {
    const Grid g(3, 12);
    auto u = random_spectral(g, 3, 5);
    dealias(u);
    for (std::size_t m = 0; m < g.size(); ++m)
        if (9 * g.k_sq(m) >= 144) CHECK(std::abs(u.at(0, m)) == 0.0);
    CHECK(u.hermitian_defect() == 0.0);
}
