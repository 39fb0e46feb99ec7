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

#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qchan/errors.hpp"
#include "qchan/numkit.hpp"

namespace qchan {

/** Spin-1 angular momentum matrices (hbar = 1). */
struct SpinGenerators {
  ComplexMatrix jx, jy, jz;
};

inline SpinGenerators spin1_generators() {
  const double r = 1.0 / std::numbers::sqrt2;
  const cplx ir = kI * r;
  return {
      ComplexMatrix{{0.0, r, 0.0}, {r, 0.0, r}, {0.0, r, 0.0}},
      ComplexMatrix{{0.0, -ir, 0.0}, {ir, 0.0, -ir}, {0.0, ir, 0.0}},
      ComplexMatrix::diagonal({1.0, 0.0, -1.0}),
  };
}

/**
 * The Landau-Streater map (Jx X Jx + Jy X Jy + Jz X Jz) / 2, extended
 * linearly to arbitrary 3x3 operators.
 */
inline ComplexMatrix ls_map(const ComplexMatrix& x) {
  if (x.rows() != 3 || x.cols() != 3)
    throw ShapeError("LS map acts on 3x3 operators, got " + x.shape_string());
  const auto j = spin1_generators();
  return (j.jx * x * j.jx + j.jy * x * j.jy + j.jz * x * j.jz) * 0.5;
}

/** (Tr X I - X^T) / (d - 1), extended linearly to arbitrary operators. */
inline ComplexMatrix wh_map(const ComplexMatrix& x) {
  if (!x.is_square()) throw ShapeError("WH map needs a square operator");
  const std::size_t d = x.rows();
  if (d < 2) throw DomainError("WH channel needs dimension at least 2");
  return (ComplexMatrix::identity(d) * x.trace() - x.transpose()) /
         static_cast<double>(d - 1);
}

inline ComplexMatrix ls_apply(const ComplexMatrix& rho) {
  if (rho.rows() != 3 || rho.cols() != 3)
    throw ShapeError("ls_apply expects a 3x3 density matrix");
  require_density(rho, "ls_apply");
  return ls_map(rho);
}

inline ComplexMatrix wh_apply(const ComplexMatrix& rho) {
  if (rho.is_square() && rho.rows() < 2)
    throw DomainError("WH channel needs dimension at least 2");
  require_density(rho, "wh_apply");
  return wh_map(rho);
}

/** W with LS(rho) = WH(W rho W^dagger). */
inline ComplexMatrix covariance_unitary() {
  return {{0.0, 0.0, 1.0}, {0.0, -1.0, 0.0}, {1.0, 0.0, 0.0}};
}

/** Order of the factors in the dilation's joint space. */
enum class Ordering { SystemFirst, EnvFirst };

struct StinespringDilation {
  ComplexMatrix u;
  ComplexMatrix rho_env;
  Ordering ordering = Ordering::SystemFirst;
  std::size_t sys_dim = 0;
  std::size_t env_dim = 0;

  void validate(Tolerance tol = {}) const {
    if (sys_dim == 0 || env_dim == 0)
      throw DimensionError("dilation dimensions must be positive");
    if (u.rows() != sys_dim * env_dim || !u.is_square())
      throw DimensionError("dilation unitary must be (sys*env)-square");
    if (!is_unitary(u, tol)) throw DomainError("dilation matrix is not unitary");
    if (rho_env.rows() != env_dim) throw DimensionError("environment state size");
    require_density(rho_env, "environment state");
  }
};

/** Tr_env(U (X (x) rho_env) U^dagger) with the dilation's factor order. */
inline ComplexMatrix stinespring_apply(const StinespringDilation& s,
                                       const ComplexMatrix& x) {
  if (x.rows() != s.sys_dim || x.cols() != s.sys_dim)
    throw ShapeError("input does not match dilation system dimension");
  const bool sys_first = s.ordering == Ordering::SystemFirst;
  const ComplexMatrix joint = sys_first ? kron(x, s.rho_env) : kron(s.rho_env, x);
  const ComplexMatrix out = s.u * joint * s.u.adjoint();
  const std::vector<std::size_t> dims =
      sys_first ? std::vector<std::size_t>{s.sys_dim, s.env_dim}
                : std::vector<std::size_t>{s.env_dim, s.sys_dim};
  return partial_trace(out, dims, {sys_first ? std::size_t{0} : std::size_t{1}});
}

/** The 9x9 LS dilation with the environment initialised to |0><0|. */
inline StinespringDilation ls_stinespring() {
  const double r = 1.0 / std::numbers::sqrt2;
  const cplx i = kI;
  // 3x3 blocks B[row][col] of the joint system-first matrix.
  using Block = std::array<std::array<cplx, 3>, 3>;
  const std::array<std::array<Block, 3>, 3> b{{
      {{
          Block{{{0.0, 0.0, 0.0}, {0.0, 0.0, i * r}, {r, 0.0, 0.0}}},
          Block{{{0.5, 0.0, 0.0},
                 {-i * 0.5, 0.0, 0.0},
                 {0.0, i * 0.5 - 0.5 * r, -i * 0.5 * r}}},
          Block{{{0.0, i * r, -i * 0.5}, {0.0, 0.0, 0.5}, {0.0, 0.0, 0.0}}},
      }},
      {{
          Block{{{0.5, 0.0, 0.0}, {i * 0.5, 0.0, 0.0}, {0.0, 1.0, 0.0}}},
          Block{{{0.0, 0.5 - i * 0.5 * r, 0.5 * r},
                 {0.0, 0.5 * r, -0.5 - i * 0.5 * r},
                 {0.0, 0.0, 0.0}}},
          Block{{{0.5, 0.0, 0.0}, {-i * 0.5, 0.0, 0.0}, {0.0, 0.0, 0.0}}},
      }},
      {{
          Block{{{0.0, 0.0, r}, {0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}}},
          Block{{{0.5, 0.0, 0.0},
                 {i * 0.5, 0.0, 0.0},
                 {0.0, 0.5 * r, 0.5 - i * 0.5 * r}}},
          Block{{{0.0, 0.0, i * 0.5}, {0.0, r, 0.5}, {-r, 0.0, 0.0}}},
      }},
  }};
  ComplexMatrix u(9, 9);
  for (std::size_t br = 0; br < 3; ++br)
    for (std::size_t bc = 0; bc < 3; ++bc)
      for (std::size_t r2 = 0; r2 < 3; ++r2)
        for (std::size_t c2 = 0; c2 < 3; ++c2)
          u(3 * br + r2, 3 * bc + c2) = b[br][bc][r2][c2];
  return {u, ComplexMatrix::projector(ComplexMatrix::basis_vector(3, 0)),
          Ordering::SystemFirst, 3, 3};
}

/**
 * Completes the leading columns of `m` (the first `fixed` must be
 * orthonormal) to a unitary by Gram-Schmidt over e_0, e_1, ... in order.
 */
inline ComplexMatrix complete_to_unitary(ComplexMatrix m, std::size_t fixed) {
  if (!m.is_square()) throw ShapeError("completion needs a square matrix");
  const std::size_t n = m.rows();
  std::size_t next = fixed;
  for (std::size_t e = 0; e < n && next < n; ++e) {
    ComplexMatrix v = ComplexMatrix::basis_vector(n, e);
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t k = 0; k < next; ++k) {
        cplx dot = 0.0;
        for (std::size_t r = 0; r < n; ++r) dot += std::conj(m(r, k)) * v(r, 0);
        for (std::size_t r = 0; r < n; ++r) v(r, 0) -= dot * m(r, k);
      }
    const double norm = v.frobenius_norm();
    if (norm < 1e-8) continue;
    for (std::size_t r = 0; r < n; ++r) m(r, next) = v(r, 0) / norm;
    ++next;
  }
  if (next != n) throw DomainError("fixed columns are not orthonormal");
  return m;
}

/**
 * The 9x9 WH dilation in environment-first order. The environment-|0>
 * block column is fixed; the remaining columns come from
 * complete_to_unitary.
 */
inline StinespringDilation wh_stinespring() {
  const double r = 1.0 / std::numbers::sqrt2;
  ComplexMatrix u(9, 9);
  // Row index 3*env + sys; column index sys for env input 0.
  u(1, 0) = -r;
  u(0, 1) = r;
  u(5, 0) = -r;
  u(3, 2) = r;
  u(8, 1) = -r;
  u(7, 2) = r;
  return {complete_to_unitary(u, 3),
          ComplexMatrix::projector(ComplexMatrix::basis_vector(3, 0)),
          Ordering::EnvFirst, 3, 3};
}

struct KrausSet {
  std::vector<ComplexMatrix> operators;

  /** max |sum K^dagger K - I|. */
  double trace_defect() const {
    if (operators.empty()) throw ArityError("empty Kraus set");
    const std::size_t d = operators.front().cols();
    ComplexMatrix s(d, d);
    for (const auto& k : operators) s += k.adjoint() * k;
    return max_abs_diff(s, ComplexMatrix::identity(d));
  }
};

inline KrausSet ls_kraus() {
  const auto j = spin1_generators();
  const double r = 1.0 / std::numbers::sqrt2;
  return {{j.jx * r, j.jy * r, j.jz * r}};
}

/** K_e = (<e| (x) I) U (|0> (x) I) style Kraus operators of a pure-environment dilation. */
inline KrausSet kraus_from_stinespring(const StinespringDilation& s) {
  const auto es = hermitian_eig(s.rho_env);
  KrausSet out;
  const std::size_t ds = s.sys_dim, de = s.env_dim;
  auto index = [&](std::size_t sys, std::size_t env) {
    return s.ordering == Ordering::SystemFirst ? sys * de + env : env * ds + sys;
  };
  for (std::size_t k = 0; k < de; ++k) {
    const double w = es.values[k];
    if (w <= 1e-14) continue;
    for (std::size_t e = 0; e < de; ++e) {
      ComplexMatrix kr(ds, ds);
      for (std::size_t so = 0; so < ds; ++so)
        for (std::size_t si = 0; si < ds; ++si) {
          cplx acc = 0.0;
          for (std::size_t ei = 0; ei < de; ++ei)
            acc += s.u(index(so, e), index(si, ei)) * es.vectors(ei, k);
          kr(so, si) = std::sqrt(w) * acc;
        }
      out.operators.push_back(std::move(kr));
    }
  }
  return out;
}

enum class AnalyticChannel { LS, WH, Identity };

inline std::string to_string(AnalyticChannel c) {
  switch (c) {
    case AnalyticChannel::LS: return "ls";
    case AnalyticChannel::WH: return "wh";
    case AnalyticChannel::Identity: return "id";
  }
  return "?";
}

inline AnalyticChannel analytic_channel_from_string(const std::string& s) {
  if (s == "ls") return AnalyticChannel::LS;
  if (s == "wh") return AnalyticChannel::WH;
  if (s == "id") return AnalyticChannel::Identity;
  throw FormatError("unknown channel '" + s + "'");
}

struct AnalyticRep {
  AnalyticChannel name = AnalyticChannel::Identity;
};

/** Choi matrix in input (x) output order, normalised to unit trace. */
struct ChoiRep {
  ComplexMatrix omega;
};

/** A channel in one of four representations. */
class ChannelRep {
 public:
  using Kind = std::variant<AnalyticRep, KrausSet, StinespringDilation, ChoiRep>;

  ChannelRep(Kind kind, std::size_t dim) : kind_(std::move(kind)), dim_(dim) {
    if (dim == 0) throw DimensionError("channel dimension must be positive");
    check();
  }

  static ChannelRep analytic(AnalyticChannel c, std::size_t dim = 3) {
    return ChannelRep(AnalyticRep{c}, dim);
  }
  static ChannelRep ls() { return analytic(AnalyticChannel::LS); }
  static ChannelRep wh(std::size_t dim = 3) { return analytic(AnalyticChannel::WH, dim); }
  static ChannelRep identity(std::size_t dim = 3) {
    return analytic(AnalyticChannel::Identity, dim);
  }
  static ChannelRep kraus(KrausSet k) {
    if (k.operators.empty()) throw ArityError("empty Kraus set");
    const std::size_t d = k.operators.front().cols();
    return ChannelRep(std::move(k), d);
  }
  static ChannelRep stinespring(StinespringDilation s) {
    const std::size_t d = s.sys_dim;
    return ChannelRep(std::move(s), d);
  }
  static ChannelRep choi(ComplexMatrix omega) {
    std::size_t d = 1;
    while (d * d < omega.rows()) ++d;
    return ChannelRep(ChoiRep{std::move(omega)}, d);
  }

  const Kind& kind() const { return kind_; }
  std::size_t dim() const { return dim_; }

 private:
  void check() const {
    if (auto* a = std::get_if<AnalyticRep>(&kind_)) {
      if (a->name == AnalyticChannel::LS && dim_ != 3)
        throw DimensionError("LS channel is defined for dimension 3");
      if (a->name == AnalyticChannel::WH && dim_ < 2)
        throw DomainError("WH channel needs dimension at least 2");
    } else if (auto* k = std::get_if<KrausSet>(&kind_)) {
      for (const auto& op : k->operators)
        if (op.rows() != dim_ || op.cols() != dim_)
          throw DimensionError("Kraus operator shape mismatch");
    } else if (auto* s = std::get_if<StinespringDilation>(&kind_)) {
      s->validate();
    } else if (auto* c = std::get_if<ChoiRep>(&kind_)) {
      if (!c->omega.is_square() || c->omega.rows() != dim_ * dim_)
        throw DimensionError("Choi matrix must be d^2 x d^2");
    }
  }

  Kind kind_;
  std::size_t dim_;
};

/** d * Tr_1((X^T (x) I) Omega) for a unit-trace Choi matrix. */
inline ComplexMatrix choi_apply(const ComplexMatrix& omega, const ComplexMatrix& x) {
  const std::size_t d = x.rows();
  if (!x.is_square() || !omega.is_square() || omega.rows() != d * d)
    throw ShapeError("Choi matrix " + omega.shape_string() +
                     " does not match operator " + x.shape_string());
  // (X^T (x) I) Omega traced over the first factor:
  // out(a,b) = sum_{i,k} X^T(k,i) Omega(i*d+a, k*d+b) = sum X(i,k) Omega(...).
  ComplexMatrix out(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) {
      const cplx xik = x(i, k);
      if (xik == cplx(0.0)) continue;
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b)
          out(a, b) += xik * omega(i * d + a, k * d + b);
    }
  return out * static_cast<double>(d);
}

/** Applies the channel's linear extension to any d x d operator. */
inline ComplexMatrix apply_linear(const ChannelRep& rep, const ComplexMatrix& x) {
  if (x.rows() != rep.dim() || x.cols() != rep.dim())
    throw ShapeError("operator " + x.shape_string() + " does not match channel dimension " +
                     std::to_string(rep.dim()));
  return std::visit(
      [&](const auto& k) -> ComplexMatrix {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, AnalyticRep>) {
          switch (k.name) {
            case AnalyticChannel::LS: return ls_map(x);
            case AnalyticChannel::WH: return wh_map(x);
            case AnalyticChannel::Identity: return x;
          }
          return x;
        } else if constexpr (std::is_same_v<T, KrausSet>) {
          ComplexMatrix out(x.rows(), x.cols());
          for (const auto& op : k.operators) out += op * x * op.adjoint();
          return out;
        } else if constexpr (std::is_same_v<T, StinespringDilation>) {
          return stinespring_apply(k, x);
        } else {
          return choi_apply(k.omega, x);
        }
      },
      rep.kind());
}

inline ComplexMatrix apply_channel(const ChannelRep& rep, const ComplexMatrix& rho) {
  if (rho.rows() != rep.dim() || rho.cols() != rep.dim())
    throw ShapeError("density " + rho.shape_string() + " does not match channel dimension " +
                     std::to_string(rep.dim()));
  require_density(rho, "apply_channel");
  return apply_linear(rep, rho);
}

/** (1/d) sum_{i,k} E_ik (x) Phi(E_ik). */
inline ComplexMatrix choi_of(const ChannelRep& rep) {
  if (auto* c = std::get_if<ChoiRep>(&rep.kind())) return c->omega;
  const std::size_t d = rep.dim();
  ComplexMatrix omega(d * d, d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k)
      omega += kron(mats::unit(d, i, k), apply_linear(rep, mats::unit(d, i, k)));
  return omega / static_cast<double>(d);
}

/** Choi matrix PSD and its output-traced marginal equal to I/d. */
inline bool is_cptp(const ChannelRep& rep, Tolerance tol = {}) {
  const ComplexMatrix omega = choi_of(rep);
  if (!is_psd(omega, tol)) return false;
  const std::size_t d = rep.dim();
  const ComplexMatrix marg = partial_trace(omega, {d, d}, {0});
  return max_abs_diff(marg, ComplexMatrix::identity(d) / static_cast<double>(d)) <=
         tol.atol;
}

/** Ket of input state k (1..9): |0>, |1>, |2>, then (|a>+|b>)/sqrt2, (|a>+i|b>)/sqrt2. */
inline ComplexMatrix basis_ket(int k) {
  if (k < 1 || k > 9) throw DomainError("basis index must be in 1..9");
  const double r = 1.0 / std::numbers::sqrt2;
  ComplexMatrix v(3, 1);
  static constexpr std::array<std::array<int, 2>, 3> pairs{{{0, 1}, {0, 2}, {1, 2}}};
  if (k <= 3) {
    v(k - 1, 0) = 1.0;
  } else if (k <= 6) {
    const auto [a, b] = pairs[k - 4];
    v(a, 0) = r;
    v(b, 0) = r;
  } else {
    const auto [a, b] = pairs[k - 7];
    v(a, 0) = r;
    v(b, 0) = kI * r;
  }
  return v;
}

inline ComplexMatrix basis_density(int k) {
  return ComplexMatrix::projector(basis_ket(k));
}

}  // namespace qchan
