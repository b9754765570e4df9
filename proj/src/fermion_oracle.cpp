#include "rydsim/fermion_oracle.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <string>

#include "rydsim/errors.hpp"

namespace rydsim {
namespace {

void check_modes(std::size_t n_modes) {
  if (n_modes > kFockModeCap) {
    throw ResourceError("Fock oracle limited to " + std::to_string(kFockModeCap) + " modes, got " +
                        std::to_string(n_modes));
  }
}

std::uint64_t species_mask(const HubbardSpec& spec, std::size_t spin) {
  std::uint64_t m = 0;
  for (std::size_t s = 0; s < spec.n_sites(); ++s) m |= std::uint64_t{1} << hubbard_mode(spec, s, spin);
  return m;
}

std::vector<double> sorted_eigenvalues(const Eigen::MatrixXd& h) {
  if (h.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
  std::vector<double> ev(es.eigenvalues().begin(), es.eigenvalues().end());
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace

std::optional<FockImage> annihilate(std::uint64_t state, std::size_t mode) {
  const std::uint64_t bit = std::uint64_t{1} << mode;
  if (!(state & bit)) return std::nullopt;
  const int sign = std::popcount(state & (bit - 1)) % 2 ? -1 : 1;
  return FockImage{state ^ bit, sign};
}

std::optional<FockImage> create(std::uint64_t state, std::size_t mode) {
  const std::uint64_t bit = std::uint64_t{1} << mode;
  if (state & bit) return std::nullopt;
  const int sign = std::popcount(state & (bit - 1)) % 2 ? -1 : 1;
  return FockImage{state ^ bit, sign};
}

Eigen::MatrixXd annihilator_matrix(std::size_t mode, std::size_t n_modes) {
  check_modes(n_modes);
  if (mode >= n_modes) throw DimensionError("mode index out of range");
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n_modes);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(dim, dim);
  for (std::uint64_t s = 0; s < static_cast<std::uint64_t>(dim); ++s) {
    if (auto img = annihilate(s, mode)) c(static_cast<Eigen::Index>(img->state), static_cast<Eigen::Index>(s)) = img->sign;
  }
  return c;
}

Eigen::MatrixXd number_matrix(std::size_t mode, std::size_t n_modes) {
  const Eigen::MatrixXd c = annihilator_matrix(mode, n_modes);
  return c.transpose() * c;
}

std::vector<std::uint64_t> sector_states(const HubbardSpec& spec, const FockSector& sector) {
  check_modes(spec.n_modes());
  if (!spec.spinful && sector.n_down != 0) throw ContractError("spinless sectors carry no down-spin count");
  std::vector<std::uint64_t> out;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << spec.n_modes()); ++s) {
    if (sector_of(spec, s) == sector) out.push_back(s);
  }
  return out;
}

std::vector<FockSector> all_sectors(const HubbardSpec& spec) {
  std::vector<FockSector> out;
  const std::size_t n = spec.n_sites();
  for (std::size_t up = 0; up <= n; ++up) {
    if (!spec.spinful) {
      out.push_back({up, 0});
      continue;
    }
    for (std::size_t down = 0; down <= n; ++down) out.push_back({up, down});
  }
  return out;
}

FockSector sector_of(const HubbardSpec& spec, std::uint64_t state) {
  const auto up = static_cast<std::size_t>(std::popcount(state & species_mask(spec, 0)));
  if (!spec.spinful) return {up, 0};
  return {up, static_cast<std::size_t>(std::popcount(state & species_mask(spec, 1)))};
}

Eigen::MatrixXd hubbard_block(const HubbardSpec& spec, const std::vector<std::uint64_t>& states) {
  check_modes(spec.n_modes());
  const auto dim = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  auto column_of = [&](std::uint64_t s) -> Eigen::Index {
    const auto it = std::lower_bound(states.begin(), states.end(), s);
    return it != states.end() && *it == s ? it - states.begin() : -1;
  };
  if (!std::is_sorted(states.begin(), states.end())) throw ContractError("sector states must be sorted");
  const auto bonds = hubbard_bonds(spec);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const std::uint64_t s = states[static_cast<std::size_t>(col)];
    for (std::size_t spin = 0; spin < spec.n_species(); ++spin) {
      for (const auto& b : bonds) {
        const std::size_t ma = hubbard_mode(spec, b.a, spin), mb = hubbard_mode(spec, b.b, spin);
        for (auto [to, from] : {std::pair{ma, mb}, std::pair{mb, ma}}) {
          const auto c = annihilate(s, from);
          if (!c) continue;
          const auto cd = create(c->state, to);
          if (!cd) continue;
          const Eigen::Index row = column_of(cd->state);
          if (row < 0) throw ContractError("basis states do not span a particle-number sector");
          h(row, col) += -spec.t_hop * c->sign * cd->sign;
        }
      }
    }
    if (spec.spinful) {
      for (std::size_t site = 0; site < spec.n_sites(); ++site) {
        const std::uint64_t both = (std::uint64_t{1} << hubbard_mode(spec, site, 0)) |
                                   (std::uint64_t{1} << hubbard_mode(spec, site, 1));
        if ((s & both) == both) h(col, col) += spec.u;
      }
    }
  }
  return h;
}

Eigen::MatrixXd hubbard_matrix(const HubbardSpec& spec) {
  check_modes(spec.n_modes());
  std::vector<std::uint64_t> all(std::size_t{1} << spec.n_modes());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return hubbard_block(spec, all);
}

std::vector<double> spectrum(const HubbardSpec& spec, const std::optional<FockSector>& sector) {
  if (sector) return sorted_eigenvalues(hubbard_block(spec, sector_states(spec, *sector)));
  std::vector<double> out;
  for (const auto& sec : all_sectors(spec)) {
    const auto ev = spectrum(spec, sec);
    out.insert(out.end(), ev.begin(), ev.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> block_spectrum(const Eigen::MatrixXcd& m, const std::vector<std::uint64_t>& states) {
  const auto dim = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXcd block(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      const auto sr = static_cast<Eigen::Index>(states[static_cast<std::size_t>(r)]);
      const auto sc = static_cast<Eigen::Index>(states[static_cast<std::size_t>(c)]);
      if (sr >= m.rows() || sc >= m.cols()) throw DimensionError("basis index outside the matrix");
      block(r, c) = m(sr, sc);
    }
  }
  if (dim == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(block, Eigen::EigenvaluesOnly);
  std::vector<double> ev(es.eigenvalues().begin(), es.eigenvalues().end());
  std::sort(ev.begin(), ev.end());
  return ev;
}

// ---------------------------------------------------------------------------

std::vector<double> jw_sector_spectrum(const HubbardSpec& spec, const FockSector& sector) {
  const Eigen::MatrixXcd h = to_matrix(build_hubbard_jw(spec), spec.n_modes());
  return block_spectrum(h, sector_states(spec, sector));
}

std::vector<double> vc_sector_spectrum(const HubbardSpec& spec, const FockSector& sector) {
  const std::size_t n = vc_qubit_count(spec);
  const Eigen::MatrixXcd h = to_matrix(build_hubbard_vc(spec), n);
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);

  // Physical occupations live on the even qubits; keep the basis states of
  // the requested sector, then project onto P = +1.
  Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index b = 0; b < dim; ++b) {
    std::uint64_t occ = 0;
    for (std::size_t m = 0; m < spec.n_modes(); ++m) {
      if ((static_cast<std::uint64_t>(b) >> (2 * m)) & 1U) occ |= std::uint64_t{1} << m;
    }
    if (sector_of(spec, occ) == sector) proj(b, b) = 1.0;
  }
  for (const auto& p : aux_projectors(spec)) {
    proj = 0.5 * (proj + to_matrix(p) * proj);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (proj + proj.adjoint()));
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < dim; ++k) {
    if (es.eigenvalues()(k) > 0.5) keep.push_back(k);
  }
  Eigen::MatrixXcd basis(dim, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) basis.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(keep[k]);
  if (keep.empty()) return {};
  const Eigen::MatrixXcd block = basis.adjoint() * h * basis;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> hs(0.5 * (block + block.adjoint()), Eigen::EigenvaluesOnly);
  const double shift = spec.v_aux * static_cast<double>(aux_pair_count(spec));
  std::vector<double> ev;
  for (Eigen::Index k = 0; k < hs.eigenvalues().size(); ++k) ev.push_back(hs.eigenvalues()(k) + shift);
  std::sort(ev.begin(), ev.end());
  return ev;
}

std::vector<SectorComparison> compare_spectra(const HubbardSpec& spec, Encoding encoding) {
  std::vector<SectorComparison> out;
  for (const auto& sec : all_sectors(spec)) {
    SectorComparison c{sec, spectrum(spec, sec),
                       encoding == Encoding::jw ? jw_sector_spectrum(spec, sec) : vc_sector_spectrum(spec, sec), 0.0};
    if (c.oracle.size() != c.encoded.size()) {
      c.max_abs_diff = std::numeric_limits<double>::infinity();
    } else {
      for (std::size_t k = 0; k < c.oracle.size(); ++k) {
        c.max_abs_diff = std::max(c.max_abs_diff, std::abs(c.oracle[k] - c.encoded[k]));
      }
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace rydsim
