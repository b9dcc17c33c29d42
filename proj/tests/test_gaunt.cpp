#include <catch2/catch_amalgamated.hpp>

#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "sfs/gaunt.hpp"

using Catch::Matchers::WithinAbs;

TEST_CASE("gaunt anchor values and selection rules", "[gaunt]") {
  const double c = 1.0 / std::sqrt(4.0 * std::numbers::pi);
  REQUIRE_THAT(sfs::gaunt({0, 0}, {0, 0}, 0), WithinAbs(c, 1e-14));
  // parity: n + nu + q odd
  REQUIRE(sfs::gaunt({1, 0}, {1, 0}, 1) == 0.0);
  // triangle violations are exact zeros
  REQUIRE(sfs::gaunt({3, 1}, {1, 0}, 1) == 0.0);
  REQUIRE(sfs::gaunt({2, 2}, {1, 1}, 1) == 0.0);  // |m + mu| > q
  // orthonormality through the constant mode: G(n,m; 0,0; n) = 1/sqrt(4 pi)
  for (int n = 0; n <= 6; ++n)
    for (int m = -n; m <= n; ++m)
      REQUIRE_THAT(sfs::gaunt({n, m}, {0, 0}, n), WithinAbs(c, 1e-13));
}

TEST_CASE("gaunt matches triple-product quadrature through order 5", "[gaunt]") {
  for (int n = 0; n <= 5; ++n)
    for (int m = -n; m <= n; ++m)
      for (int nu = 0; nu <= 5; ++nu)
        for (int mu = -nu; mu <= nu; ++mu)
          for (int q = 0; q <= 5; ++q) {
            if (std::abs(m + mu) > q) continue;
            REQUIRE_THAT(sfs::gaunt({n, m}, {nu, mu}, q),
                         WithinAbs(oracles::gaunt_quadrature(n, m, nu, mu, q), 1e-10));
          }
}

TEST_CASE("gaunt argument-exchange symmetry", "[gaunt]") {
  for (int n = 0; n <= 5; ++n)
    for (int m = -n; m <= n; ++m)
      for (int nu = 0; nu <= 5; ++nu)
        for (int mu = -nu; mu <= nu; ++mu)
          for (int q = std::abs(n - nu); q <= n + nu; ++q)
            REQUIRE_THAT(sfs::gaunt({n, m}, {nu, mu}, q),
                         WithinAbs(sfs::gaunt({nu, mu}, {n, m}, q), 1e-14));
}

TEST_CASE("gaunt cache is concurrent and consistent", "[gaunt]") {
  sfs::GauntCache cache;
  std::vector<std::thread> pool;
  std::atomic<int> mismatches{0};
  for (int t = 0; t < 4; ++t)
    pool.emplace_back([&] {
      for (int rep = 0; rep < 3; ++rep)
        for (int n = 0; n <= 4; ++n)
          for (int m = -n; m <= n; ++m)
            for (int nu = 0; nu <= 2; ++nu)
              for (int mu = -nu; mu <= nu; ++mu)
                for (int q = 0; q <= 6; ++q)
                  if (cache.get({n, m}, {nu, mu}, q) != sfs::gaunt({n, m}, {nu, mu}, q))
                    mismatches.fetch_add(1);
    });
  for (auto& th : pool) th.join();
  REQUIRE(mismatches.load() == 0);
  REQUIRE(cache.size() > 0);
}
