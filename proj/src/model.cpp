#include "adiatrack/model.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace adiatrack {

namespace {

constexpr double kHermiticityTol = 1e-12;

// Annihilate mode `from` and create mode `to` within one spin species,
// returning the Jordan-Wigner sign. The up-before-down mode order makes the
// cross-species string cancel for same-species bilinears, so species-local
// parities are sufficient. Returns 0 amplitude if the hop is Pauli-blocked.
int hop_sign(std::uint32_t mask, int from, int to, std::uint32_t* result) {
  const std::uint32_t from_bit = std::uint32_t{1} << from;
  const std::uint32_t to_bit = std::uint32_t{1} << to;
  if (!(mask & from_bit) || (mask & to_bit)) return 0;
  int parity = std::popcount(mask & (from_bit - 1));
  const std::uint32_t removed = mask & ~from_bit;
  parity += std::popcount(removed & (to_bit - 1));
  *result = removed | to_bit;
  return (parity % 2 == 0) ? 1 : -1;
}

}  // namespace

HubbardParams HubbardParams::half_filled(int n_sites, double interaction, double hopping) {
  if (n_sites % 2 != 0) {
    throw std::domain_error("HubbardParams::half_filled: n_sites must be even, got " +
                            std::to_string(n_sites));
  }
  HubbardParams p;
  p.n_sites = n_sites;
  p.hopping = hopping;
  p.interaction = interaction;
  p.n_up = n_sites / 2;
  p.n_down = n_sites / 2;
  p.validate();
  return p;
}

void HubbardParams::validate() const {
  if (n_sites < 1) throw std::domain_error("HubbardParams: n_sites must be positive");
  if (hopping <= 0.0) throw std::domain_error("HubbardParams: hopping J must be positive");
  if (interaction < 0.0) throw std::domain_error("HubbardParams: interaction U must be >= 0");
  if (n_up < 0 || n_up > n_sites || n_down < 0 || n_down > n_sites) {
    throw std::domain_error("HubbardParams: occupations out of range");
  }
}

void DriveProtocol::validate() const {
  if (tau <= 0.0) throw std::domain_error("DriveProtocol: tau must be positive");
}

double onsite_potential(int site, double t, const DriveProtocol& drive, int n_sites) {
  if (site < 1 || site > n_sites) {
    throw std::domain_error("onsite_potential: site " + std::to_string(site) +
                            " outside 1.." + std::to_string(n_sites));
  }
  const double x = n_sites > 1 ? 2.0 * (site - 1.0) / (n_sites - 1.0) - 1.0 : 0.0;
  return drive.mu0 * x + drive.mu_tau * x * (t / drive.tau);
}

HermitianOperator HermitianOperator::from_matrix(Matrix m) {
  const double scale = std::max(1.0, m.norm());
  if ((m - m.adjoint()).norm() > kHermiticityTol * scale) {
    throw std::domain_error("HermitianOperator: matrix is not Hermitian");
  }
  return HermitianOperator{std::move(m)};
}

HermitianOperator build_hamiltonian(const HubbardParams& params, const SectorBasis& basis,
                                    const DriveProtocol& drive, double t) {
  params.validate();
  drive.validate();
  if (basis.n_sites() != params.n_sites || basis.n_up() != params.n_up ||
      basis.n_down() != params.n_down) {
    throw std::domain_error("build_hamiltonian: basis does not match params");
  }

  const int n = params.n_sites;
  const long dim = basis.dim();
  const long dd = static_cast<long>(basis.down_masks().size());
  Matrix h = Matrix::Zero(dim, dim);

  std::vector<double> v(n);
  for (int i = 1; i <= n; ++i) v[i - 1] = onsite_potential(i, t, drive, n);

  for (long col = 0; col < dim; ++col) {
    const SectorConfig c = basis.config(col);

    double diag = params.interaction * std::popcount(c.up & c.down);
    for (int b = 0; b < n; ++b) {
      const int occ = ((c.up >> b) & 1u) + ((c.down >> b) & 1u);
      diag += v[b] * occ;
    }
    h(col, col) += diag;

    // Nearest-neighbour hops, both directions; fills h Hermitian.
    for (int b = 0; b + 1 < n; ++b) {
      for (int dir = 0; dir < 2; ++dir) {
        const int from = dir == 0 ? b + 1 : b;
        const int to = dir == 0 ? b : b + 1;
        std::uint32_t moved = 0;
        if (int sign = hop_sign(c.up, from, to, &moved)) {
          const long row = static_cast<long>(basis.up_index(moved)) * dd + (col % dd);
          h(row, col) += -params.hopping * sign;
        }
        if (int sign = hop_sign(c.down, from, to, &moved)) {
          const long row = (col / dd) * dd + basis.down_index(moved);
          h(row, col) += -params.hopping * sign;
        }
      }
    }
  }

  return HermitianOperator::from_matrix(std::move(h));
}

HermitianOperator hamiltonian_time_derivative(const SectorBasis& basis,
                                              const DriveProtocol& drive) {
  drive.validate();
  const int n = basis.n_sites();
  const long dim = basis.dim();
  Matrix h = Matrix::Zero(dim, dim);

  std::vector<double> rate(n);
  for (int i = 1; i <= n; ++i) {
    const double x = n > 1 ? 2.0 * (i - 1.0) / (n - 1.0) - 1.0 : 0.0;
    rate[i - 1] = drive.mu_tau * x / drive.tau;
  }

  for (long k = 0; k < dim; ++k) {
    const SectorConfig c = basis.config(k);
    double diag = 0.0;
    for (int b = 0; b < n; ++b) {
      diag += rate[b] * (((c.up >> b) & 1u) + ((c.down >> b) & 1u));
    }
    h(k, k) = diag;
  }
  return HermitianOperator{std::move(h)};
}

std::vector<HermitianOperator> site_occupation_operators(const SectorBasis& basis) {
  const int n = basis.n_sites();
  const long dim = basis.dim();
  std::vector<HermitianOperator> ops;
  ops.reserve(n);
  for (int b = 0; b < n; ++b) {
    Matrix m = Matrix::Zero(dim, dim);
    for (long k = 0; k < dim; ++k) {
      const SectorConfig c = basis.config(k);
      m(k, k) = static_cast<double>(((c.up >> b) & 1u) + ((c.down >> b) & 1u));
    }
    ops.push_back(HermitianOperator{std::move(m)});
  }
  return ops;
}

}  // namespace adiatrack
