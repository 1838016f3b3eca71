#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "analogc/hml.hpp"
#include "analogc/schedule.hpp"

namespace analogc {

inline constexpr std::size_t kMaxDenseSites = 12;

class SizeGuardError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Row-major 2^n x 2^n complex matrix. Site 0 is the most significant bit of a basis index.
struct DenseOperator {
    std::size_t n = 0;
    std::vector<Complex> data;

    std::size_t dim() const { return std::size_t{1} << n; }
    Complex& operator()(std::size_t r, std::size_t c) { return data[r * dim() + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return data[r * dim() + c]; }

    bool operator==(const DenseOperator&) const = default;

    static DenseOperator zeros(std::size_t n);
    static DenseOperator identity(std::size_t n);
};

DenseOperator to_dense(const ConcreteHamiltonian& h, std::size_t n);
DenseOperator multiply(const DenseOperator& a, const DenseOperator& b);
DenseOperator adjoint(const DenseOperator& a);
DenseOperator operator+(const DenseOperator& a, const DenseOperator& b);
DenseOperator operator-(const DenseOperator& a, const DenseOperator& b);
DenseOperator operator*(Complex s, const DenseOperator& a);

// max |A - A^dagger|
double hermitian_defect(const DenseOperator& a);
// max |U^dagger U - I|
double unitarity_defect(const DenseOperator& u);
double spectral_norm(const DenseOperator& a);
std::vector<double> hermitian_eigenvalues(const DenseOperator& h);

// exp(-i tau H) via Hermitian eigendecomposition. Throws std::invalid_argument on a non-Hermitian H.
DenseOperator hermitian_exp(const DenseOperator& h, double tau);

// Applies segments first to last: result = e^{-i tau_N H_N} ... e^{-i tau_1 H_1}.
DenseOperator evolve(const std::vector<Segment>& segments, std::size_t n);

// Per-segment (sys(g) + sum of executions) pairs in execution order.
std::vector<Segment> schedule_segments(const InstructionSchedule& sched, const AAIS& aais);
std::vector<Segment> schedule_segments(const BlockSchedule& sched, const AAIS& aais);
DenseOperator schedule_unitary(const InstructionSchedule& sched, const AAIS& aais, std::size_t n);
DenseOperator schedule_unitary(const BlockSchedule& sched, const AAIS& aais, std::size_t n);

// ||U - e^{i phi} V||_2 with phi = arg Tr(V^dagger U).
double phase_aligned_distance(const DenseOperator& u, const DenseOperator& v);
// Total variation between the output distributions of U|0..0> and V|0..0>.
double tv_distance(const DenseOperator& u, const DenseOperator& v);

struct BoundParams {
    double C1 = 1.0, C2 = 1.0, C3 = 1.0;
    double D = 1.0;        // discretization steps
    double M = 0.0;        // max ||H(t)||
    double K = 0.0;        // Lipschitz constant of H(t)
    double T = 0.0;        // total evolution time
    double epsilon = 0.0;  // synthesis residual
    double Lambda = 0.0;   // Trotter constant
    double R = 1.0;        // Trotter repetitions
    double S = 0.0;        // signal lines
    double Delta = 0.0;    // implementation error per line
    double Gamma = 0.0;    // max pulse duration factor
};

// C1 M K T^2 / D + C2 eps + (Lambda T)^2/(D R) e^{Lambda T/(D R)} + C3 S Delta Gamma T
double error_bound(const BoundParams& p);

struct TrotterSegment {
    std::uint32_t segment = 0;
    double lambda = 0.0;    // L_j * max group norm, in device amplitude units
    double duration = 0.0;  // device time of the segment: R * step duration
};

// Per Trotterized segment, L_j * max_group ||H_group||, where the group
// Hamiltonian is the instruction sum (plus sys(g) when include_sys) and the norm
// is spectral when the group touches at most kMaxDenseSites sites, coefficient l1
// otherwise.
std::vector<TrotterSegment> trotter_segments(const BlockSchedule& sched, const AAIS& aais, bool include_sys);
double trotter_lambda(const BlockSchedule& sched, const AAIS& aais, bool include_sys);

// Sum over Trotterized segments of trotter_error_bound(lambda_j, t_j, 1, R).
double trotter_bound(const std::vector<TrotterSegment>& segments, double repetitions);

// Lipschitz and magnitude estimates for a discretized program: M = max ||H_d||,
// K = max ||H_{d+1} - H_d|| / (T/D) using coefficient l1 norms.
std::pair<double, double> discretization_constants(const std::vector<Segment>& segments);

}  // namespace analogc
