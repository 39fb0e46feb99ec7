// Copyright 2026 The qchan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>

#include <catch_amalgamated.hpp>

#include "qchan/channel.hpp"
#include "qchan/numkit.hpp"
#include "qchan/random.hpp"

namespace qchan {
namespace {

using Catch::Matchers::WithinAbs;

ComplexMatrix psi_plus_3() {
  ComplexMatrix v(9, 1);
  for (std::size_t i = 0; i < 3; ++i) v(4 * i, 0) = 1.0 / std::sqrt(3.0);
  return ComplexMatrix::projector(v);
}

TEST_CASE("Matrix construction rejects bad shapes") {
  REQUIRE_THROWS_AS(ComplexMatrix(0, 2), ShapeError);
  REQUIRE_THROWS_AS(ComplexMatrix(2, 2, std::vector<cplx>(3)), ShapeError);
  REQUIRE_THROWS_AS((ComplexMatrix{{1.0, 2.0}, {3.0}}), ShapeError);
  const ComplexMatrix a(2, 3);
  REQUIRE_THROWS_AS(a * a, DimensionError);
  REQUIRE_THROWS_AS(a + ComplexMatrix(3, 2), DimensionError);
  REQUIRE_THROWS_AS(Tolerance(-1.0), DomainError);
}

TEST_CASE("kron") {
  SECTION("identity") {
    REQUIRE(max_abs_diff(kron(ComplexMatrix::identity(2), ComplexMatrix::identity(2)),
                         ComplexMatrix::identity(4)) == 0.0);
  }
  SECTION("basis flip") {
    const ComplexMatrix e00 = ComplexMatrix::basis_vector(4, 0);
    const ComplexMatrix xx = kron(mats::pauli_x(), mats::pauli_x());
    REQUIRE(max_abs_diff(xx * e00, ComplexMatrix::basis_vector(4, 3)) == 0.0);
  }
  SECTION("entry layout") {
    const ComplexMatrix a{{1.0, 2.0}, {3.0, 4.0}};
    const ComplexMatrix b{{0.0, kI}, {5.0, 0.0}, {1.0, 1.0}};
    const ComplexMatrix k = kron(a, b);
    REQUIRE(k.rows() == 6);
    REQUIRE(k.cols() == 4);
    for (std::size_t i1 = 0; i1 < 2; ++i1)
      for (std::size_t j1 = 0; j1 < 2; ++j1)
        for (std::size_t i2 = 0; i2 < 3; ++i2)
          for (std::size_t j2 = 0; j2 < 2; ++j2)
            REQUIRE(k(i1 * 3 + i2, j1 * 2 + j2) == a(i1, j1) * b(i2, j2));
  }
  SECTION("tensor of one-qubit gates has unit-modulus pattern") {
    const ComplexMatrix t = kron({mats::hadamard(), ComplexMatrix::identity(2),
                                  mats::pauli_x(), mats::pauli_x()});
    REQUIRE(t.rows() == 16);
    REQUIRE(is_unitary(t, Tolerance{1e-12}));
    for (std::size_t r = 0; r < 16; ++r) {
      int nonzero = 0;
      for (std::size_t c = 0; c < 16; ++c)
        if (std::abs(t(r, c)) > 1e-12) {
          ++nonzero;
          REQUIRE_THAT(std::abs(t(r, c)), WithinAbs(1.0 / std::sqrt(2.0), 1e-12));
        }
      REQUIRE(nonzero == 2);
    }
  }
}

TEST_CASE("partial_trace") {
  Rng rng(11);
  const ComplexMatrix rho = random_density(3, rng);
  const ComplexMatrix sigma = random_density(3, rng);
  SECTION("product state") {
    REQUIRE(max_abs_diff(partial_trace(kron(rho, sigma), {3, 3}, {0}), rho) < 1e-14);
    REQUIRE(max_abs_diff(partial_trace(kron(rho, sigma), {3, 3}, {1}), sigma) < 1e-14);
  }
  SECTION("maximally entangled") {
    REQUIRE(max_abs_diff(partial_trace(psi_plus_3(), {3, 3}, {0}),
                         ComplexMatrix::identity(3) / 3.0) < 1e-15);
  }
  SECTION("maximally mixed") {
    REQUIRE(max_abs_diff(partial_trace(ComplexMatrix::identity(9) / 9.0, {3, 3}, {1}),
                         ComplexMatrix::identity(3) / 3.0) < 1e-15);
  }
  SECTION("three factors, kept in index order") {
    const ComplexMatrix tau = random_density(2, rng);
    const ComplexMatrix m = kron({rho, tau, sigma});
    REQUIRE(max_abs_diff(partial_trace(m, {3, 2, 3}, {0, 2}), kron(rho, sigma)) < 1e-14);
    REQUIRE(max_abs_diff(partial_trace(m, {3, 2, 3}, {1}), tau) < 1e-14);
    REQUIRE(std::abs(partial_trace(m, {3, 2, 3}, {}).trace() - 1.0) < 1e-14);
  }
  SECTION("trace preserved") {
    const ComplexMatrix m = random_density(12, rng);
    REQUIRE(std::abs(partial_trace(m, {2, 2, 3}, {1}).trace() - m.trace()) < 1e-14);
  }
  SECTION("errors") {
    REQUIRE_THROWS_AS(partial_trace(ComplexMatrix::identity(9), {2, 3}, {0}), DimensionError);
    REQUIRE_THROWS_AS(partial_trace(ComplexMatrix::identity(9), {3, 3}, {2}), DimensionError);
  }
}

TEST_CASE("hermitian_eig") {
  SECTION("diagonal") {
    const auto e = hermitian_eig(ComplexMatrix::diagonal({3.0, 1.0, 2.0}));
    REQUIRE(e.values == std::vector<double>{3.0, 2.0, 1.0});
  }
  SECTION("pauli x") {
    const auto e = hermitian_eig(mats::pauli_x());
    REQUIRE_THAT(e.values[0], WithinAbs(1.0, 1e-14));
    REQUIRE_THAT(e.values[1], WithinAbs(-1.0, 1e-14));
  }
  SECTION("werner-holevo Choi") {
    const auto e = hermitian_eig(choi_of(ChannelRep::wh()));
    for (std::size_t i = 0; i < 9; ++i)
      REQUIRE_THAT(e.values[i], WithinAbs(i < 3 ? 1.0 / 3.0 : 0.0, 1e-12));
  }
  SECTION("reconstruction on random Hermitian matrices") {
    Rng rng(5);
    for (std::size_t d : {1u, 2u, 5u, 9u, 16u}) {
      ComplexMatrix g(d, d);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) g(i, j) = cplx(rng.normal(), rng.normal());
      const ComplexMatrix m = g.hermitian_part();
      const auto e = hermitian_eig(m);
      std::vector<cplx> diag(e.values.begin(), e.values.end());
      const ComplexMatrix back =
          e.vectors * ComplexMatrix::diagonal(diag) * e.vectors.adjoint();
      REQUIRE(max_abs_diff(back, m) < 1e-10);
      REQUIRE(is_unitary(e.vectors, Tolerance{1e-10}));
      for (std::size_t i = 1; i < d; ++i) REQUIRE(e.values[i - 1] >= e.values[i]);
    }
  }
  SECTION("non-square") { REQUIRE_THROWS_AS(hermitian_eig(ComplexMatrix(2, 3)), ShapeError); }
}

TEST_CASE("is_unitary") {
  REQUIRE(is_unitary(ComplexMatrix::identity(4), Tolerance{1e-12}));
  REQUIRE(is_unitary(ls_stinespring().u, Tolerance{1e-12}));
  REQUIRE_FALSE(is_unitary(ComplexMatrix::diagonal({1.0, 0.5}), Tolerance{1e-12}));
  REQUIRE_FALSE(is_unitary(ComplexMatrix(2, 3)));
}

TEST_CASE("is_psd") {
  REQUIRE(is_psd(ComplexMatrix::identity(3) / 3.0));
  REQUIRE_FALSE(is_psd(mats::pauli_z()));
  REQUIRE(is_psd(choi_of(ChannelRep::ls())));
  REQUIRE_FALSE(is_psd(mats::pauli_y() * kI));
}

TEST_CASE("sqrtm_psd") {
  SECTION("squares back on random PSD matrices") {
    Rng rng(99);
    for (int t = 0; t < 100; ++t) {
      const std::size_t d = 1 + t % 16;
      const ComplexMatrix m = random_density(d, rng) * (1.0 + t);
      const ComplexMatrix s = sqrtm_psd(m);
      REQUIRE(max_abs_diff(s * s, m) < 1e-9);
      REQUIRE(is_hermitian(s, Tolerance{1e-12}));
    }
  }
  SECTION("clamps tiny negative eigenvalues") {
    const ComplexMatrix m = ComplexMatrix::diagonal({1.0, -1e-13});
    REQUIRE(max_abs_diff(sqrtm_psd(m), ComplexMatrix::diagonal({1.0, 0.0})) < 1e-15);
  }
  SECTION("errors") {
    REQUIRE_THROWS_AS(sqrtm_psd(mats::pauli_z()), NotPsdError);
    REQUIRE_THROWS_AS(sqrtm_psd(ComplexMatrix{{1.0, 1.0}, {0.0, 1.0}}), ShapeError);
  }
}

TEST_CASE("solve") {
  const ComplexMatrix a{{2.0, kI}, {1.0, 3.0}};
  const ComplexMatrix x{{1.0, 0.0}, {-kI, 2.0}};
  REQUIRE(max_abs_diff(solve(a, a * x), x) < 1e-14);
  REQUIRE_THROWS_AS(solve(ComplexMatrix{{1.0, 2.0}, {2.0, 4.0}}, ComplexMatrix::identity(2)),
                    DomainError);
}

TEST_CASE("equal_up_to_global_phase") {
  const ComplexMatrix h = mats::hadamard();
  REQUIRE(equal_up_to_global_phase(h * std::exp(kI * 0.7), h));
  REQUIRE_FALSE(equal_up_to_global_phase(h, mats::pauli_x()));
  REQUIRE_FALSE(equal_up_to_global_phase(h, ComplexMatrix::identity(4)));
}

TEST_CASE("permute_qubits") {
  ComplexMatrix cx = ComplexMatrix::identity(4);
  cx(2, 2) = 0.0;
  cx(3, 3) = 0.0;
  cx(2, 3) = 1.0;
  cx(3, 2) = 1.0;
  const std::vector<std::size_t> flip{1, 0};
  const ComplexMatrix rev = permute_qubits(cx, flip);
  const ComplexMatrix hh = kron(mats::hadamard(), mats::hadamard());
  REQUIRE(max_abs_diff(rev, hh * cx * hh) < 1e-15);
}

TEST_CASE("require_density") {
  REQUIRE_NOTHROW(require_density(ComplexMatrix::identity(2) / 2.0, "t"));
  REQUIRE_THROWS_AS(require_density(ComplexMatrix::identity(2), "t"), DomainError);
  REQUIRE_THROWS_AS(require_density(mats::pauli_z(), "t"), DomainError);
  REQUIRE_THROWS_AS(require_density(ComplexMatrix(2, 3), "t"), DomainError);
}

TEST_CASE("Rng is reproducible and substreams differ") {
  Rng a(7), b(7);
  for (int i = 0; i < 10; ++i) REQUIRE(a() == b());
  REQUIRE(Rng::substream(7, 0)() != Rng::substream(7, 1)());
  Rng u(3);
  double mean = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double x = u.uniform();
    REQUIRE(x >= 0.0);
    REQUIRE(x < 1.0);
    mean += x;
  }
  REQUIRE_THAT(mean / 100000.0, WithinAbs(0.5, 0.01));
  Rng r(8);
  const ComplexMatrix rho = random_density(4, r);
  REQUIRE(is_psd(rho));
  REQUIRE_THAT(rho.trace().real(), WithinAbs(1.0, 1e-14));
}

}  // namespace
}  // namespace qchan
