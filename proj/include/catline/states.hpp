#pragma once

#include <complex>

#include "catline/operators.hpp"

namespace catline {

/// Normalized state vector on a truncated Fock space.
struct Ket {
  int dim = 0;
  Vector amplitudes;

  Ket(int dim_, Vector amps);
  DensityMatrix density() const;
};

enum class Parity { Even, Odd };

/// The logical cat-qubit basis at amplitude alpha: the orthonormal pair
/// |C+> (logical 0, even parity) and |C-> (logical 1, odd parity), plus
/// the logical Paulis embedded in the full Fock space as rank-2 operators.
struct CatBasis {
  double alpha = 0.0;
  int dim = 0;
  Ket c_plus;
  Ket c_minus;
  Operator sigma_x;
  Operator sigma_y;
  Operator sigma_z;
};

struct BlochVector {
  double x = 0.0, y = 0.0, z = 0.0;
};

/// Minimum truncation dimension for amplitude |alpha|:
/// max(8, ceil(|alpha|^2 + 6|alpha| + 10)). Enforced, not advisory.
int required_dim(double alpha_abs);

/// Fock basis state |n>.
Ket fock(int n, int dim);

/// Truncated coherent state, renormalized. Throws TruncationError when
/// dim violates the sizing rule for |alpha|.
Ket coherent(Complex alpha, int dim);

/// Even/odd cat state (|alpha> +/- |-alpha>), renormalized numerically
/// after truncation. Odd cat at alpha = 0 is degenerate and refused.
Ket cat(double alpha, Parity parity, int dim);

/// Cat basis with logical Paulis at amplitude alpha.
CatBasis cat_basis(double alpha, int dim);

/// cos(theta/2)|C+> + sin(theta/2) e^{-i phi}|C->.
Ket logical_state(const CatBasis& basis, double theta, double phi);

/// (|C+> + |C->)/sqrt(2); Z-expectation exactly zero.
Ket plus_state(const CatBasis& basis);

/// (Tr[rho sx], Tr[rho sy], Tr[rho sz]) in the logical basis.
BlochVector bloch_vector(const DensityMatrix& rho, const CatBasis& basis);

/// <ket| rho |ket>, real.
double fidelity(const DensityMatrix& rho, const Ket& ket);

}  // namespace catline
