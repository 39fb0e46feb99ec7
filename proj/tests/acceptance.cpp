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

// Acceptance checks. Prints one PASS/FAIL line per criterion; exits nonzero
// if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qchan/qchan.hpp"

namespace {

using namespace qchan;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

Outcome stinespring_correct() {
  const auto s = ls_stinespring();
  double dev = 0.0;
  for (int k = 1; k <= 9; ++k) {
    const ComplexMatrix rho = basis_density(k);
    const ComplexMatrix big = s.u * kron(rho, s.rho_env) * s.u.adjoint();
    const ComplexMatrix out = partial_trace(big, {s.sys_dim, s.env_dim}, {0});
    dev = std::max(dev, max_abs_diff(out, ls_apply(rho)));
  }
  return {dev < 1e-10, "max deviation " + num(dev)};
}

Outcome covariance() {
  Rng rng(20260101);
  const ComplexMatrix w = covariance_unitary();
  double dev = 0.0;
  for (int t = 0; t < 200; ++t) {
    const ComplexMatrix rho = random_density(3, rng);
    dev = std::max(dev, max_abs_diff(ls_apply(rho), wh_apply(w * rho * w.adjoint())));
  }
  return {dev < 1e-12, "max deviation " + num(dev)};
}

Outcome induced_channels() {
  Rng rng(3);
  std::vector<ComplexMatrix> inputs;
  for (int k = 1; k <= 9; ++k) inputs.push_back(basis_density(k));
  for (int t = 0; t < 50; ++t) inputs.push_back(random_density(3, rng));
  double dev = 0.0, leak = 0.0;
  const InducedChannel wh(wh_channel_circuit()), ls(ls_channel_circuit());
  for (const auto& rho : inputs) {
    const auto a = wh(rho), b = ls(rho);
    dev = std::max({dev, max_abs_diff(a.rho, wh_apply(rho)), max_abs_diff(b.rho, ls_apply(rho))});
    leak = std::max({leak, a.leakage, b.leakage});
  }
  return {dev < 1e-9 && leak < 1e-10, "max deviation " + num(dev) + ", leakage " + num(leak)};
}

Outcome choi_structure() {
  const ComplexMatrix wh = analytic_choi(ChannelRep::wh());
  const double dev = max_abs_diff(wh, (ComplexMatrix::identity(9) - mats::swap(3)) / 6.0);
  double eig_dev = 0.0;
  for (const auto& om : {analytic_choi(ChannelRep::ls()), wh}) {
    auto v = hermitian_eig(om).values;
    std::sort(v.begin(), v.end());
    for (std::size_t i = 0; i < 9; ++i)
      eig_dev = std::max(eig_dev, std::abs(v[i] - (i < 6 ? 0.0 : 1.0 / 3.0)));
  }
  return {dev < 1e-12 && eig_dev < 1e-9,
          "swap form deviation " + num(dev) + ", spectrum deviation " + num(eig_dev)};
}

Outcome two_route() {
  double dev = 0.0;
  for (const auto& ch : {ChannelRep::ls(), ChannelRep::wh(), ChannelRep::identity()}) {
    std::vector<ComplexMatrix> outs;
    for (int k = 1; k <= 9; ++k) outs.push_back(apply_channel(ch, basis_density(k)));
    dev = std::max(dev, max_abs_diff(choi_linear(outs), analytic_choi(ch)));
  }
  const double coeff = max_abs_diff(rederive_basis_coefficients(), basis_decomposition().coeffs);
  return {dev < 1e-10 && coeff < 1e-12,
          "Choi deviation " + num(dev) + ", coefficient deviation " + num(coeff)};
}

Outcome roundtrip() {
  Rng rng(26);
  double dev = 0.0;
  for (const auto& ch : {ChannelRep::ls(), ChannelRep::wh(), ChannelRep::identity()}) {
    const ComplexMatrix om = analytic_choi(ch);
    for (int t = 0; t < 100; ++t) {
      const ComplexMatrix rho = random_density(3, rng);
      dev = std::max(dev, max_abs_diff(channel_from_choi(om, rho), apply_channel(ch, rho)));
    }
  }
  return {dev < 1e-10, "max deviation " + num(dev)};
}

double mean_output_fidelity(const ChannelCircuit& cc, const ChannelRep& ch, std::uint64_t shots,
                            int seeds) {
  double sum = 0.0;
  for (int s = 0; s < seeds; ++s) {
    const auto outs = tomograph_basis_outputs(cc, shots, static_cast<std::uint64_t>(s));
    for (int k = 1; k <= 9; ++k)
      sum += fidelity(outs[k - 1].rho, apply_channel(ch, basis_density(k)));
  }
  return sum / (9.0 * seeds);
}

Outcome state_pipeline() {
  const double wh8 = mean_output_fidelity(wh_channel_circuit(), ChannelRep::wh(), 8192, 20);
  const double ls8 = mean_output_fidelity(ls_channel_circuit(), ChannelRep::ls(), 8192, 20);
  const double wh64 = mean_output_fidelity(wh_channel_circuit(), ChannelRep::wh(), 65536, 20);
  const double ls64 = mean_output_fidelity(ls_channel_circuit(), ChannelRep::ls(), 65536, 20);
  const bool ok = std::min(wh8, ls8) >= 0.97 && std::min(wh64, ls64) >= 0.99;
  return {ok, "8192 shots: WH " + num(wh8) + ", LS " + num(ls8) + "; 65536 shots: WH " +
                  num(wh64) + ", LS " + num(ls64)};
}

Outcome direct_choi() {
  const auto wh = choi_direct(wh_channel_circuit(), 1000000, 7);
  const auto ls = choi_direct(ls_channel_circuit(), 1000000, 7);
  const double fw = choi_fidelity(analytic_choi(ChannelRep::wh()), wh.omega);
  const double fl = choi_fidelity(analytic_choi(ChannelRep::ls()), ls.omega);
  return {std::min(fw, fl) >= 0.99, "WH " + num(fw) + ", LS " + num(fl)};
}

Outcome noise_monotone() {
  const std::vector<double> p2s{0.0, 0.02, 0.05, 0.1};
  constexpr int kSeeds = 5;
  bool ok = true;
  std::string detail;
  for (const auto& [name, cc, theory] :
       {std::tuple{"WH", wh_channel_circuit(), analytic_choi(ChannelRep::wh())},
        std::tuple{"LS", ls_channel_circuit(), analytic_choi(ChannelRep::ls())}}) {
    std::vector<double> means;
    for (double p2 : p2s) {
      double sum = 0.0;
      for (int s = 0; s < kSeeds; ++s) {
        const auto est = choi_direct(cc, 8192, static_cast<std::uint64_t>(s),
                                     NoiseConfig{0.0, p2, 0.0, 0.0});
        sum += choi_fidelity(theory, est.omega);
      }
      means.push_back(sum / kSeeds);
    }
    for (std::size_t i = 1; i < means.size(); ++i) ok = ok && means[i] <= means[i - 1];
    ok = ok && means.back() < 0.9;
    detail += std::string(detail.empty() ? "" : "; ") + name + ":";
    for (double m : means) detail += " " + num(m);
  }
  return {ok, detail};
}

Outcome decompositions() {
  Circuit cx10(2);
  cx10.cx(1, 0);
  const ComplexMatrix y2 = kron(ComplexMatrix::identity(2), mats::pauli_y());
  const ComplexMatrix x2 = kron(ComplexMatrix::identity(2), mats::pauli_x());
  const double w = max_abs_diff(unitary_of(w_tilde_circuit()), y2 * unitary_of(cx10) * x2 * kI);
  const bool qt = equal_up_to_global_phase(unitary_of(quasi_toffoli_circuit()),
                                           quasi_toffoli_matrix(), Tolerance{1e-12});
  Circuit cx01(2);
  cx01.cx(0, 1);
  const double rev = max_abs_diff(unitary_of(reverse_cnot(0, 1)), unitary_of(cx01));
  return {w < 1e-12 && qt && rev < 1e-12, "W deviation " + num(w) + ", quasi-Toffoli " +
                                               (qt ? "match" : "mismatch") +
                                               ", reversal deviation " + num(rev)};
}

Outcome routing() {
  const CouplingMap map = coupling::ibmqx4();
  Rng rng(11);
  int bad = 0;
  for (int t = 0; t < 200; ++t) {
    Circuit c(4);
    for (int g = 0; g < 24; ++g) {
      const std::size_t a = static_cast<std::size_t>(rng.uniform() * 4);
      if (rng.uniform() < 0.4) {
        c.cx(a, (a + 1 + static_cast<std::size_t>(rng.uniform() * 3)) % 4);
      } else {
        c.u3(a, rng.uniform() * 6.3, rng.uniform() * 6.3, rng.uniform() * 6.3);
      }
    }
    const Circuit r = route_circuit(c, map);
    if (!validate(r, map).empty() ||
        !equal_up_to_global_phase(unitary_of(r), unitary_of(c.widened(5)), Tolerance{1e-9}))
      ++bad;
  }
  return {bad == 0, std::to_string(bad) + " of 200 circuits failed"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"stinespring_correctness", stinespring_correct},
      {"covariance_identity", covariance},
      {"circuit_induced_channels", induced_channels},
      {"choi_structure", choi_structure},
      {"two_route_choi", two_route},
      {"choi_roundtrip", roundtrip},
      {"state_tomography_pipeline", state_pipeline},
      {"direct_choi_pipeline", direct_choi},
      {"noise_monotonicity", noise_monotone},
      {"decomposition_identities", decompositions},
      {"routing_semantics", routing},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::printf("%s %zu %s (%s) [%.2fs]\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
