#pragma once

// Exact diagonalization of the Hubbard model directly in the fermionic Fock
// basis. Bit m of a basis index is the occupation of mode m, with modes
// numbered as in hubbard_mode (snake order, spins interleaved), so the basis
// lines up with the computational basis of build_hubbard_jw.

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "rydsim/models.hpp"

namespace rydsim {

inline constexpr std::size_t kFockModeCap = 12;

/// Fixed particle numbers. Spinless models use n_up as the total number and
/// require n_down == 0.
struct FockSector {
  std::size_t n_up = 0;
  std::size_t n_down = 0;
  friend bool operator==(const FockSector&, const FockSector&) = default;
};

/// Result of applying a fermionic operator to one occupation bitmask.
struct FockImage {
  std::uint64_t state;
  int sign;
};

/// c_m |state>, or nothing if mode m is empty. The sign counts occupied
/// modes below m.
std::optional<FockImage> annihilate(std::uint64_t state, std::size_t mode);
std::optional<FockImage> create(std::uint64_t state, std::size_t mode);

/// Dense 2^n x 2^n matrices of c_m and n_m in the Fock basis.
Eigen::MatrixXd annihilator_matrix(std::size_t mode, std::size_t n_modes);
Eigen::MatrixXd number_matrix(std::size_t mode, std::size_t n_modes);

/// Occupation bitmasks of a sector in increasing order.
std::vector<std::uint64_t> sector_states(const HubbardSpec& spec, const FockSector& sector);
/// Every (N_up, N_down) (or N) sector of the model.
std::vector<FockSector> all_sectors(const HubbardSpec& spec);
/// Sector labels of a basis state.
FockSector sector_of(const HubbardSpec& spec, std::uint64_t state);

/// Full Hamiltonian in the Fock basis. Throws ResourceError above
/// kFockModeCap modes.
Eigen::MatrixXd hubbard_matrix(const HubbardSpec& spec);
/// Hamiltonian block on the given basis states (rows/columns in that order).
Eigen::MatrixXd hubbard_block(const HubbardSpec& spec, const std::vector<std::uint64_t>& states);

/// Sorted eigenvalues, of the whole model or of one sector.
std::vector<double> spectrum(const HubbardSpec& spec, const std::optional<FockSector>& sector = std::nullopt);

/// Sorted eigenvalues of the block of a dense Hermitian matrix on the given
/// basis indices.
std::vector<double> block_spectrum(const Eigen::MatrixXcd& m, const std::vector<std::uint64_t>& states);

// ---------------------------------------------------------------------------
// Certification of the spin encodings against the oracle

enum class Encoding { jw, vc };

/// Sector spectrum of build_hubbard_jw, read off the qubit basis.
std::vector<double> jw_sector_spectrum(const HubbardSpec& spec, const FockSector& sector);
/// Sector spectrum of build_hubbard_vc restricted to the joint +1 eigenspace
/// of aux_projectors, shifted by +v_aux * aux_pair_count so that it is
/// directly comparable with the oracle.
std::vector<double> vc_sector_spectrum(const HubbardSpec& spec, const FockSector& sector);

struct SectorComparison {
  FockSector sector;
  std::vector<double> oracle;
  std::vector<double> encoded;
  /// Largest |oracle - encoded|; infinity if the multiplicities differ.
  double max_abs_diff = 0.0;
};

std::vector<SectorComparison> compare_spectra(const HubbardSpec& spec, Encoding encoding);

}  // namespace rydsim
