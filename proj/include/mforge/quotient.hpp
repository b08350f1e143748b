#ifndef MFORGE_QUOTIENT_HPP
#define MFORGE_QUOTIENT_HPP

// Symplectic-quotient data for a rational Delzant polytope: the u-matrix
// Z^d -> Z^n, a saturated basis B of its kernel lattice, the momentum level
// c = i*(-lambda), the induced momentum map nu on the level set, isotropy
// orders of faces, and the Kempf-Ness projection that rescales a stable
// point onto the level set by Newton descent of a convex functional.

#include "mforge/flat_model.hpp"
#include "mforge/lattice.hpp"
#include "mforge/polytope.hpp"

namespace mforge::quotient {

using flatmodel::FlatPoint;
using linalg::Mat;
using linalg::Vec;
using polytope::LabelledPolytope;

struct DelzantData {
    LabelledPolytope p;
    lattice::IntMatrix u_matrix;      // n x d, columns u_j
    lattice::IntMatrix kernel;        // d x (d-n), saturated Z-basis B of n ∩ Z^d
    Vec c;                            // c_k = -sum_j lambda_j B_jk
    lattice::Int sublattice_index;    // [Z^n : <u_1..u_d>]
    std::vector<int> nu_facets;       // n facet indices used for nu solves
};

// Requires classify_delzant(p) to be Integral or Rational; throws
// NotDelzantError otherwise.
DelzantData build_delzant_data(const LabelledPolytope& p);

// component k is sum_j B_jk (mu_j(v) + lambda_j); zero exactly on the level set
Vec level_residual(const DelzantData& d, const FlatPoint& v);

// The unique x with ell_j(x) = mu_j(v) for a point on the level set, solved
// from the stored best-conditioned facet subsystem; the remaining d-n
// equations are verified. Throws OffLevelSetError / InconsistentSystemError.
Vec nu(const DelzantData& d, const FlatPoint& v, double tol_kn = kTolKn);

// |N_v| for the face with the given active set: product of the invariant
// factors of the selected u-columns. Empty set -> 1. Throws
// DependentNormalsError if the selected normals are linearly dependent.
lattice::Int isotropy_order(const DelzantData& d, const std::vector<int>& face_indices);

struct KempfNessOptions {
    double tol_kn = kTolKn;
    int max_iterations = 100;
    Vec start;  // initial xi; zero vector when empty
};

struct KempfNessResult {
    Vec xi;               // solve coordinates in the basis B
    Vec s;                // s = B xi (log-scalings)
    Vec t;                // t_j = exp(s_j)
    FlatPoint projected;  // t . z
    Vec x;                // nu(projected), valid when converged
    double hat_k = 0.0;   // valid when converged
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Newton minimization of Phi(xi) = 1/4 sum_j e^{2(B xi)_j} r_j^2 - <c, xi>.
// grad Phi equals the level residual of the rescaled point. Throws
// UnstableError when the Hessian degenerates or the iterates run away
// (z outside the stable set); MaxIterations is reported, not thrown.
KempfNessResult kempf_ness_project(const DelzantData& d, const FlatPoint& z,
                                   const KempfNessOptions& opt = {});

struct HatKDecomposition {
    double hat_k;            // 1/2 sum_j (ell_j(x) + lambda_j log t_j^2)
    double bg_form;          // 1/4 |t.z|^2 + 1/2 sum_j lambda_j log t_j^2
    double guillemin_diff;   // hat_k - F(x)
    bool lambda_integral;    // character labelling meaningful only when true
};

// Requires all r_j > 0 and a convergent projection.
HatKDecomposition hatK_decomposition(const DelzantData& d, const FlatPoint& z,
                                     const KempfNessOptions& opt = {});

}  // namespace mforge::quotient

#endif
