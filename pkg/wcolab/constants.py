DEFAULT_ORDER = 256  # Truncation order N of series and finite sections
GUARD_BAND = 16  # Extra series order used when rendering products and sums
TAIL_WINDOW = 16  # Trailing coefficients inspected by the tail estimate
ROUNDING_FLOOR = 64 * 2.220446049250313e-16  # Relative size at which a coefficient is treated as rounding noise
BOUNDARY_GRID = 4096  # Uniform nodes on the unit circle
WINDING_NODES = 4096  # Minimum trapezoidal nodes for the argument principle
WINDING_MAX_ORDER = 4096  # Largest series order tried for psi' on a winding contour
INTERIOR_RADIUS = 0.9  # Radius of the interior grid for identity residuals
INTERIOR_GRID = 256  # Nodes on the interior circle
SAMPLE_RADIUS = 0.6  # Largest modulus of sampled kernel points
SAMPLE_PAIRS = 25  # Number of sampled (w, v) pairs
GELFAND_POWERS = 64  # Default k_max of the Gelfand estimate
DEFAULT_SEED = 0
BOUNDED_BELOW_OVERSAMPLE = 4  # Row multiple of the tall sections used for smallest singular values
ORBIT_REVISIT = 1e-9  # Distance under which an orbit point counts as a revisit
ORBIT_EDGE = 1e-6  # Distance to the unit circle at which a kernel orbit stops
JACOBI_MAX_SWEEPS = 60
POWER_ITERATIONS = 2000

TOLERANCES = {
    "geometry": 1e-10,  # Self-map, automorphism and fixed point predicates
    "roundtrip": 1e-12,  # parabolic_from / translation_number, automorphism_form
    "commutator": 1e-6,  # Self-commutator eigenvalues, relative to max(1, |T|^2)
    "kernel_defect": 1e-7,  # Kernel normality defect, relative to max(1, |K_w||K_v|)
    "identity": 1e-10,  # Closed-form identity residuals
    "series_tail": 1e-10,  # Relative tail bound accepted by evaluate_series
    "hermitian": 1e-12,  # Hermitian symmetry check before diagonalizing
    "winding": 1e-2,  # Integrality residual of the winding number
    "zero_contour": 1e-6,  # Minimum |psi| on a contour before a zero counts as "on" it
    "kernel_adjoint": 1e-8,  # Finite-section residual of the adjoint-on-kernel identity
    "normaloid": 1e-9,  # Relative slack of the norm bound against the spectral radius
    "profile": 1e-9,  # Boundary weight inequalities and constancy
    "power_iteration": 1e-12,  # Relative change at which power iteration stops
    "modulus": 1e-12,  # |phi(0)| - |a| comparisons
    "parabolic": 1e-10,  # |a| = |t/(2+t)| comparison
    "nonnormal_gap": 1e-3,  # Commutator eigenvalue and kernel defect that count as a clear departure from normal
}
