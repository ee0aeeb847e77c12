#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "qgraph/graph.hpp"
#include "qgraph/trig_poly.hpp"

namespace qgraph {

/// One monomial A e^{i L k} of Tr S^l, grouped by the exact number of
/// traversals of every bond. Lengths and amplitudes are in symbol units: for
/// a graph with stride s, `symbolic_length` l stands for Tr S^{s l} and the
/// amplitude is the trace coefficient divided by s.
struct OrbitTerm {
  Complex amplitude;
  double reduced_action = 0.0;
  int symbolic_length = 0;
  std::vector<int> traversals;  // per undirected bond
};

/// A prime periodic orbit: a cyclic sequence of directed bonds that is not a
/// repetition. `amplitude` is the product of U entries along the cycle.
struct PrimeOrbitTerm {
  Complex amplitude;
  double reduced_action = 0.0;
  int prime_length = 0;  // symbol units
  int repetition = 1;
  std::vector<int> cycle;  // directed-bond indices, Lyndon rotation
};

struct OrbitOptions {
  int l_max_limit = 20;
  std::size_t max_terms = 4'000'000;
};

/// Tr S^l for l = 1..l_max, by symbolic products of D U. Entry l-1 holds the
/// terms of symbolic length l.
using TraceSeries = std::vector<std::vector<OrbitTerm>>;
TraceSeries trace_series(const QuantumGraph& graph, int l_max,
                         const OrbitOptions& options = {});
std::vector<OrbitTerm> trace_powers(const QuantumGraph& graph, int l,
                                    const OrbitOptions& options = {});

/// Evaluates sum_m A_m e^{i L_m k} (times the stride, i.e. Tr S^{s l}).
Complex evaluate_trace(const std::vector<OrbitTerm>& terms, int stride, double k);

/// All prime periodic orbits with prime length <= l_max, enumerated as
/// Lyndon words over the directed-bond alphabet restricted to nonzero U
/// transitions. Independent of the symbolic matrix products above.
std::vector<PrimeOrbitTerm> prime_orbits(const QuantumGraph& graph, int l_max,
                                         const OrbitOptions& options = {});

struct ExpansionResult {
  double k = 0.0;
  std::vector<double> partial_sums;  // entry l-1: truncated at length l
  std::size_t terms_used = 0;
  std::size_t primes_used = 0;  // distinct prime orbits, where applicable
};

/// k_n = pi/omega0 (2n + mu + gamma0) - integral of N(k) over the root cell,
/// the fluctuating part integrated term by term from the cell endpoints.
ExpansionResult eigenvalue_integral(const TraceSeries& traces,
                                    const TrigPolynomial& trig, int n, int l_max);
ExpansionResult eigenvalue_integral(const QuantumGraph& graph,
                                    const TrigPolynomial& trig, int n, int l_max);

/// Periodic-orbit formula summed strictly by symbolic length.
ExpansionResult eigenvalue_po(const TraceSeries& traces, const TrigPolynomial& trig,
                              int n, int l_max);
ExpansionResult eigenvalue_po(const QuantumGraph& graph, const TrigPolynomial& trig,
                              int n, int l_max);

/// Prime orbits and repetitions with 1/nu^2 weights, grouped by total length
/// nu * l_P.
ExpansionResult eigenvalue_po_prime(const std::vector<PrimeOrbitTerm>& primes,
                                    const TrigPolynomial& trig, int n, int l_max);
ExpansionResult eigenvalue_po_prime(const QuantumGraph& graph,
                                    const TrigPolynomial& trig, int n, int l_max);

/// Cell integral of e^{i L k}: 2 e^{i L k_bar} sin(pi L / (2 omega0)) / L.
Complex cell_phase_integral(const TrigPolynomial& trig, int n, double action);

using RealFunction = std::function<double(double)>;

struct FunctionOfRootOptions {
  double quadrature_tolerance = 1e-10;
};

/// f(k_n) = n f(k_hat_n) - (n-1) f(k_hat_{n-1}) - int f'(k) N(k) dk, with the
/// mean staircase integrated numerically and the orbit part through
/// G_n(L) = int f'(k) e^{i L k} dk by adaptive Gauss-Kronrod quadrature.
/// Throws AccuracyError when a quadrature misses the tolerance.
double function_of_root(const RealFunction& f, const RealFunction& f_prime,
                        const TrigPolynomial& trig, const TraceSeries& traces,
                        int n, int l_max, const FunctionOfRootOptions& options = {});
double function_of_root(const RealFunction& f, const RealFunction& f_prime,
                        const TrigPolynomial& trig, const QuantumGraph& graph,
                        int n, int l_max, const FunctionOfRootOptions& options = {});

}  // namespace qgraph
