#include "decoy/entropy_oracle.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>

#include "decoy/errors.hpp"
#include "decoy/key_rate.hpp"
#include "decoy/parallel.hpp"
#include "decoy/source_model.hpp"

namespace decoy {

namespace {
constexpr double kStateTol = 1e-12;

std::vector<double> clamped_eigenvalues(ComplexMatrix const& hermitian)
{
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw InvalidState("eigendecomposition failed");
    std::vector<double> out(solver.eigenvalues().data(),
                            solver.eigenvalues().data() + solver.eigenvalues().size());
    for (auto& l : out)
    {
        if (std::abs(l) < kEigenClamp)
            l = 0;
    }
    return out;
}

double entropy_of(std::vector<double> const& eigenvalues)
{
    double h = 0;
    for (double l : eigenvalues)
    {
        if (l > 0)
            h -= l * std::log2(l);
    }
    return h;
}
}  // namespace

DensityMatrix::DensityMatrix(ComplexMatrix entries)
{
    if (entries.rows() == 0 || entries.rows() != entries.cols())
        throw InvalidState("density matrix must be square and non-empty");
    if (!entries.allFinite())
        throw InvalidState("density matrix has non-finite entries");
    double const asym = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
    if (asym >= kStateTol)
        throw InvalidState("density matrix is not Hermitian (deviation "
                           + std::to_string(asym) + ")");
    Complex const tr = entries.trace();
    if (std::abs(tr.real() - 1) > kStateTol || std::abs(tr.imag()) > kStateTol)
        throw InvalidState("density matrix trace differs from 1");
    entries_ = (entries + entries.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(entries_, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -kStateTol)
        throw InvalidState("density matrix has a negative eigenvalue");
}

DensityMatrix DensityMatrix::diagonal(std::vector<double> const& probs)
{
    ComplexMatrix m = ComplexMatrix::Zero(probs.size(), probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i)
        m(i, i) = probs[i];
    return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::pure(Eigen::VectorXcd const& psi)
{
    Eigen::VectorXcd const unit = psi.normalized();
    return DensityMatrix(unit * unit.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim)
{
    return diagonal(std::vector<double>(dim, 1.0 / static_cast<double>(dim)));
}

std::vector<double> DensityMatrix::eigenvalues() const
{
    return clamped_eigenvalues(entries_);
}

void validate_cq(CqState const& cq)
{
    if (cq.probs.empty() || cq.probs.size() != cq.conditionals.size())
        throw InvalidState("cq state needs one conditional per label");
    double total = 0;
    for (double p : cq.probs)
    {
        if (!(p >= 0))
            throw InvalidState("cq state has a negative label probability");
        total += p;
    }
    if (std::abs(total - 1) > kStateTol)
        throw InvalidState("cq label probabilities do not sum to 1");
    for (auto const& c : cq.conditionals)
    {
        if (c.dim() != cq.conditionals.front().dim())
            throw InvalidState("cq conditionals have different dimensions");
    }
}

KrausChannel::KrausChannel(std::vector<ComplexMatrix> operators) : ops_(std::move(operators))
{
    if (ops_.empty())
        throw InvalidState("Kraus channel needs at least one operator");
    for (auto const& k : ops_)
    {
        if (k.rows() != ops_.front().rows() || k.cols() != ops_.front().cols())
            throw InvalidState("Kraus operators have inconsistent shapes");
    }
    ComplexMatrix sum = ComplexMatrix::Zero(ops_.front().cols(), ops_.front().cols());
    for (auto const& k : ops_)
        sum += k.adjoint() * k;
    ComplexMatrix const slack = ComplexMatrix::Identity(sum.rows(), sum.cols()) - sum;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(slack, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -kStateTol)
        throw InvalidState("Kraus operators increase the trace");
}

std::size_t KrausChannel::input_dim() const noexcept
{
    return static_cast<std::size_t>(ops_.front().cols());
}

std::size_t KrausChannel::output_dim() const noexcept
{
    return static_cast<std::size_t>(ops_.front().rows());
}

bool KrausChannel::trace_preserving(double tol) const
{
    ComplexMatrix sum = ComplexMatrix::Zero(input_dim(), input_dim());
    for (auto const& k : ops_)
        sum += k.adjoint() * k;
    return (sum - ComplexMatrix::Identity(sum.rows(), sum.cols())).cwiseAbs().maxCoeff() <= tol;
}

ComplexMatrix KrausChannel::apply(ComplexMatrix const& rho) const
{
    if (static_cast<std::size_t>(rho.rows()) != input_dim())
        throw InvalidState("input dimension does not match the Kraus channel");
    ComplexMatrix out = ComplexMatrix::Zero(output_dim(), output_dim());
    for (auto const& k : ops_)
        out += k * rho * k.adjoint();
    return out;
}

double von_neumann_entropy(DensityMatrix const& rho)
{
    return entropy_of(rho.eigenvalues());
}

double relative_entropy(DensityMatrix const& rho, DensityMatrix const& sigma)
{
    if (rho.dim() != sigma.dim())
        throw InvalidState("relative entropy of states with different dimensions");

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sigma.entries());
    if (solver.info() != Eigen::Success)
        throw InvalidState("eigendecomposition failed");
    ComplexMatrix const rho_in_sigma
        = solver.eigenvectors().adjoint() * rho.entries() * solver.eigenvectors();

    double cross = 0;  // Tr rho log2 sigma
    for (Eigen::Index k = 0; k < rho_in_sigma.rows(); ++k)
    {
        double const weight = rho_in_sigma(k, k).real();
        double const s = solver.eigenvalues()(k);
        if (std::abs(s) < kEigenClamp || s < 0)
        {
            if (weight > kStateTol)
                return std::numeric_limits<double>::infinity();
            continue;
        }
        cross += weight * std::log2(s);
    }
    return -von_neumann_entropy(rho) - cross;
}

double conditional_entropy_cq(CqState const& cq)
{
    validate_cq(cq);
    std::size_t const dim = cq.conditionals.front().dim();
    std::vector<double> joint_spectrum;
    ComplexMatrix marginal = ComplexMatrix::Zero(dim, dim);
    for (std::size_t a = 0; a < cq.probs.size(); ++a)
    {
        ComplexMatrix const block = cq.probs[a] * cq.conditionals[a].entries();
        auto const ev = clamped_eigenvalues(block);
        joint_spectrum.insert(joint_spectrum.end(), ev.begin(), ev.end());
        marginal += block;
    }
    return entropy_of(joint_spectrum) - entropy_of(clamped_eigenvalues(marginal));
}

TruncatedCqState bs_attack_cq_state(double mu, double t, int n_max)
{
    if (n_max < 1)
        throw DomainError("Fock truncation needs n_max >= 1");
    if (!(t >= 0 && t <= 1) || !(mu >= 0))
        throw DomainError("beam-splitting state needs t in [0, 1] and mu >= 0");

    double const mu_e = (1 - t) * mu;
    std::vector<double> weights(n_max + 1);
    double kept = 0;
    for (int j = 0; j <= n_max; ++j)
    {
        weights[j] = photon_number_pmf(mu_e, j);
        kept += weights[j];
    }
    double tail = 0;
    for (int j = n_max + 1; j < n_max + 400; ++j)
    {
        double const w = photon_number_pmf(mu_e, j);
        tail += w;
        if (w < 1e-300 || (j > mu_e && w < 1e-20 * tail))
            break;
    }

    std::size_t const dim = 1 + 2 * static_cast<std::size_t>(n_max);
    TruncatedCqState out;
    out.tail_mass = tail;
    out.state.probs = {0.5, 0.5};
    for (int u = 0; u <= 1; ++u)
    {
        ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
        m(0, 0) = weights[0] / kept;
        for (int j = 1; j <= n_max; ++j)
        {
            std::size_t const slot = 1 + 2 * static_cast<std::size_t>(j - 1) + u;
            m(slot, slot) = weights[j] / kept;
        }
        out.state.conditionals.emplace_back(std::move(m));
    }
    return out;
}

DensityMatrix random_density_matrix(std::size_t dim, RandomStream& rng)
{
    ComplexMatrix g(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
    {
        for (std::size_t j = 0; j < dim; ++j)
            g(i, j) = Complex(rng.normal(), rng.normal());
    }
    ComplexMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix((rho + rho.adjoint()) / 2.0);
}

std::string dump_matrix(ComplexMatrix const& m)
{
    std::ostringstream os;
    os << std::setprecision(17);
    for (Eigen::Index r = 0; r < m.rows(); ++r)
    {
        for (Eigen::Index c = 0; c < m.cols(); ++c)
        {
            if (c)
                os << ' ';
            os << m(r, c).real() << ',' << m(r, c).imag();
        }
        os << '\n';
    }
    return os.str();
}

ConvexityReport verify_joint_convexity(std::size_t trials,
                                       std::size_t dim,
                                       std::uint64_t seed,
                                       double slack,
                                       unsigned workers)
{
    if (dim < 1 || dim > 6)
        throw DomainError("joint convexity check supports 1 <= dim <= 6");

    struct Trial
    {
        double excess{0};
        std::string dump;
    };
    std::vector<Trial> results(trials);

    parallel_for(trials, workers ? workers : default_workers(), [&](std::size_t i) {
        auto rng = RandomStream::substream(seed, i);
        auto const rho1 = random_density_matrix(dim, rng);
        auto const rho2 = random_density_matrix(dim, rng);
        auto const sigma1 = random_density_matrix(dim, rng);
        auto const sigma2 = random_density_matrix(dim, rng);
        double const p = rng.uniform();

        DensityMatrix const rho_mix(p * rho1.entries() + (1 - p) * rho2.entries());
        DensityMatrix const sigma_mix(p * sigma1.entries() + (1 - p) * sigma2.entries());
        double const lhs = relative_entropy(rho_mix, sigma_mix);
        double const rhs
            = p * relative_entropy(rho1, sigma1) + (1 - p) * relative_entropy(rho2, sigma2);
        results[i].excess = lhs - rhs;
        if (results[i].excess > slack)
        {
            std::ostringstream os;
            os << std::setprecision(17) << "p=" << p << "\nrho1:\n"
               << dump_matrix(rho1.entries()) << "rho2:\n" << dump_matrix(rho2.entries())
               << "sigma1:\n" << dump_matrix(sigma1.entries()) << "sigma2:\n"
               << dump_matrix(sigma2.entries());
            results[i].dump = os.str();
        }
    });

    ConvexityReport report;
    report.trials = trials;
    report.max_violation = -std::numeric_limits<double>::infinity();
    for (auto const& r : results)
    {
        if (r.excess > slack)
        {
            ++report.violations;
            if (r.excess > report.max_violation)
                report.counterexample = r.dump;
        }
        report.max_violation = std::max(report.max_violation, r.excess);
    }
    return report;
}

VacuumEntropyReport verify_vacuum_component_entropy(double p0, bool distinguishable)
{
    if (!(p0 >= 0 && p0 <= 1))
        throw DomainError("bit probability outside [0, 1]");
    // adversary space: vacuum, one photon carrying 0, one photon carrying 1
    CqState cq;
    cq.probs = {p0, 1 - p0};
    if (distinguishable)
    {
        cq.conditionals = {DensityMatrix::diagonal({0, 1, 0}), DensityMatrix::diagonal({0, 0, 1})};
    }
    else
    {
        auto const vacuum = DensityMatrix::diagonal({1, 0, 0});
        cq.conditionals = {vacuum, vacuum};
    }

    VacuumEntropyReport report;
    report.entropy = conditional_entropy_cq(cq);
    report.expected = distinguishable ? 0.0 : binary_entropy(p0);
    report.pass = std::abs(report.entropy - report.expected) <= 1e-12;
    return report;
}

}  // namespace decoy
