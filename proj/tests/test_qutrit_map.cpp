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
#include "qchan/decomp.hpp"
#include "qchan/qutrit_map.hpp"
#include "qchan/random.hpp"

namespace qchan {
namespace {

using Catch::Matchers::WithinAbs;

TEST_CASE("embed_state") {
  REQUIRE(max_abs_diff(embed_state(ComplexMatrix::basis_vector(3, 0)),
                       ComplexMatrix::basis_vector(4, 0)) == 0.0);
  REQUIRE(max_abs_diff(embed_state(ComplexMatrix::basis_vector(3, 2)),
                       ComplexMatrix::basis_vector(4, 2)) == 0.0);
  const double s = 1.0 / std::sqrt(3.0);
  const ComplexMatrix sup = embed_state(ComplexMatrix(3, 1, {s, s, s}));
  REQUIRE(max_abs_diff(sup, ComplexMatrix(4, 1, {s, s, s, 0.0})) == 0.0);
  REQUIRE_THROWS_AS(embed_state(ComplexMatrix(3, 1, {1.0, 1.0, 0.0})), DomainError);
  REQUIRE_THROWS_AS(embed_state(ComplexMatrix::basis_vector(4, 0)), ShapeError);
}

TEST_CASE("embed_density") {
  REQUIRE(max_abs_diff(embed_density(ComplexMatrix::identity(3) / 3.0),
                       ComplexMatrix::diagonal({1.0 / 3, 1.0 / 3, 1.0 / 3, 0.0})) < 1e-16);
  ComplexMatrix rho4(4, 4);
  rho4(0, 0) = rho4(0, 1) = rho4(1, 0) = rho4(1, 1) = 0.5;
  REQUIRE(max_abs_diff(embed_density(basis_density(4)), rho4) < 1e-15);
  REQUIRE_THROWS_AS(embed_density(ComplexMatrix::identity(3)), DomainError);
}

TEST_CASE("project_qutrit") {
  SECTION("leakage is the |11> weight") {
    ComplexMatrix rho = embed_density(ComplexMatrix::identity(3) / 3.0) * 0.9;
    rho(3, 3) = 0.1;
    const auto p = project_qutrit(rho);
    REQUIRE(max_abs_diff(p.rho, ComplexMatrix::identity(3) / 3.0) < 1e-15);
    REQUIRE_THAT(p.leakage, WithinAbs(0.1, 1e-15));
  }
  SECTION("output is a density matrix") {
    Rng rng(12);
    for (int t = 0; t < 50; ++t) {
      const auto p = project_qutrit(random_density(4, rng));
      REQUIRE(p.leakage < 1.0);
      REQUIRE(is_psd(p.rho, Tolerance{1e-9}));
      REQUIRE_THAT(p.rho.trace().real(), WithinAbs(1.0, 1e-12));
    }
  }
  SECTION("embedding then projecting is the identity") {
    Rng rng(13);
    const ComplexMatrix rho = random_density(3, rng);
    const auto p = project_qutrit(embed_density(rho));
    REQUIRE(max_abs_diff(p.rho, rho) < 1e-15);
    REQUIRE(p.leakage == 0.0);
  }
  SECTION("two qutrits") {
    Rng rng(14);
    const ComplexMatrix a = random_density(3, rng), b = random_density(3, rng);
    const auto p = project_qutrits(kron(embed_density(a), embed_density(b)), 2);
    REQUIRE(max_abs_diff(p.rho, kron(a, b)) < 1e-15);
  }
  SECTION("errors") {
    ComplexMatrix all11(4, 4);
    all11(3, 3) = 1.0;
    REQUIRE_THROWS_AS(project_qutrit(all11), DegenerateProjectionError);
    REQUIRE_THROWS_AS(project_qutrit(ComplexMatrix::identity(3) / 3.0), ShapeError);
  }
}

TEST_CASE("InducedChannel") {
  SECTION("noiseless channel circuits do not leak") {
    std::vector<ComplexMatrix> inputs;
    for (int k = 1; k <= 9; ++k) inputs.push_back(basis_density(k));
    REQUIRE(induced_channel(wh_channel_circuit()).mean_leakage(inputs) < 1e-10);
    REQUIRE(induced_channel(ls_channel_circuit()).mean_leakage(inputs) < 1e-10);
  }
  SECTION("identity circuit") {
    const auto id = induced_channel(identity_channel_circuit());
    for (int k = 1; k <= 9; ++k)
      REQUIRE(max_abs_diff(id(basis_density(k)).rho, basis_density(k)) < 1e-15);
  }
  SECTION("noise produces leakage but a valid state") {
    const auto ch = induced_channel(wh_channel_circuit(), NoiseConfig{0.01, 0.05, 0.01, 0.0});
    const auto out = ch(basis_density(1));
    REQUIRE(out.leakage > 0.0);
    REQUIRE(is_psd(out.rho, Tolerance{1e-9}));
    REQUIRE_THAT(out.rho.trace().real(), WithinAbs(1.0, 1e-12));
  }
  SECTION("role validation") {
    ChannelCircuit cc = wh_channel_circuit();
    cc.env = {0, 3};
    REQUIRE_THROWS_AS(induced_channel(cc), DomainError);
    cc.env = {2, 7};
    REQUIRE_THROWS_AS(induced_channel(cc), DomainError);
  }
}

}  // namespace
}  // namespace qchan
