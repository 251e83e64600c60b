#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "decoy/random.hpp"

namespace decoy {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

//! Eigenvalues with magnitude below this are treated as exactly zero.
inline constexpr double kEigenClamp = 1e-12;

/*!
 * Validated density operator: Hermitian, unit trace, positive semidefinite
 * (all within 1e-12).
 */
class DensityMatrix
{
  public:
    //! Throws InvalidState if the invariants fail.
    explicit DensityMatrix(ComplexMatrix entries);

    static DensityMatrix diagonal(std::vector<double> const& probs);
    static DensityMatrix pure(Eigen::VectorXcd const& psi);
    static DensityMatrix maximally_mixed(std::size_t dim);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
    ComplexMatrix const& entries() const noexcept { return entries_; }

    //! Clamped eigenvalues, ascending.
    std::vector<double> eigenvalues() const;

  private:
    ComplexMatrix entries_;
};

//! Classical-quantum state sum_a p_a |a><a| (x) rho_a.
struct CqState
{
    std::vector<double> probs;
    std::vector<DensityMatrix> conditionals;
};

void validate_cq(CqState const& cq);

/*!
 * Finite Kraus representation of a completely positive map.
 *
 * Trace non-increasing maps are allowed: sum K^dagger K <= identity.
 */
class KrausChannel
{
  public:
    explicit KrausChannel(std::vector<ComplexMatrix> operators);

    std::size_t input_dim() const noexcept;
    std::size_t output_dim() const noexcept;
    bool trace_preserving(double tol = 1e-12) const;

    //! Unnormalized output sum K rho K^dagger.
    ComplexMatrix apply(ComplexMatrix const& rho) const;

  private:
    std::vector<ComplexMatrix> ops_;
};

//! -Tr(rho log2 rho)
double von_neumann_entropy(DensityMatrix const& rho);

//! Tr rho(log2 rho - log2 sigma); +infinity when supp(rho) is not inside supp(sigma).
double relative_entropy(DensityMatrix const& rho, DensityMatrix const& sigma);

//! H(A|E) = H(rho_AE) - H(rho_E) for a cq state.
double conditional_entropy_cq(CqState const& cq);

struct TruncatedCqState
{
    CqState state;
    double tail_mass{0};  //!< Poisson mass beyond the truncation, dropped before renormalizing
};

/*!
 * Adversary state of the beam-splitting attack in a truncated Fock basis.
 *
 * Basis: vacuum, then |j,0>, |j,1> for j = 1..n_max. For bit u the
 * conditional is the Poisson((1-t) mu) mixture of vacuum and the j-photon
 * states carrying u.
 */
TruncatedCqState bs_attack_cq_state(double mu, double t, int n_max);

//! Random full-rank density matrix from a complex Ginibre matrix.
DensityMatrix random_density_matrix(std::size_t dim, RandomStream& rng);

struct ConvexityReport
{
    std::size_t trials{0};
    std::size_t violations{0};
    double max_violation{0};  //!< max of lhs - rhs (negative when all hold)
    //! Dump of the worst violating instance, if any.
    std::optional<std::string> counterexample;
};

/*!
 * Sample (rho1, rho2, sigma1, sigma2, p) and check joint convexity of the
 * relative entropy with `slack`. Trial i draws from RandomStream::substream(seed, i).
 */
ConvexityReport verify_joint_convexity(std::size_t trials,
                                       std::size_t dim,
                                       std::uint64_t seed,
                                       double slack = 1e-9,
                                       unsigned workers = 0);

struct VacuumEntropyReport
{
    double entropy{0};
    double expected{0};
    bool pass{false};
};

/*!
 * Both bit values map to the adversary's vacuum: H(A|E) must equal H(bit).
 *
 * With `distinguishable` the conditionals are made orthogonal instead, a
 * contrast case where H(A|E) drops below H(bit).
 */
VacuumEntropyReport verify_vacuum_component_entropy(double p0 = 0.5,
                                                    bool distinguishable = false);

//! Row-major plain text, one row per line, entries as "re,im".
std::string dump_matrix(ComplexMatrix const& m);

}  // namespace decoy
