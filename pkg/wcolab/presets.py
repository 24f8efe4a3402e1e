"""Preset scenarios. Each preset states the claim it exercises and the verdicts it expects."""

import math

HARDY = {"type": "hardy"}
BERGMAN_0 = {"type": "bergman", "alpha": 0}
BERGMAN_1 = {"type": "bergman", "alpha": 1}

HALF_DISK_SHIFT = {"type": "lft", "coeffs": [[1, 0], [0.5, 0], [0.5, 0], [1, 0]]}  # (z + 1/2)/(1 + z/2)
PARABOLIC_T1 = {"type": "lft", "coeffs": [[1, 0], [1, 0], [-1, 0], [3, 0]]}  # (z + 1)/(3 - z)
HALF = {"type": "lft", "coeffs": [[0.5, 0], [0, 0], [0, 0], [1, 0]]}  # z/2
QUARTER_TURN = {"type": "lft", "coeffs": [[0, 1], [0, 0], [0, 0], [1, 0]]}  # iz

ONE = {"type": "poly", "coeffs": [[1, 0]]}
KERNEL_MINUS_HALF = {"type": "kernel", "w": [-0.5, 0]}
NORMAL = {"type": "normal-auto"}
PERTURBED_NORMAL = {"type": "sum", "terms": [NORMAL, {"type": "poly", "coeffs": [[0, 0], [0.1, 0]]}]}

NORMAL_CHECKS = [
    "normal-symbol", "hyponormality", "kernel-defect", "kernel-modulus", "eigen-weight", "boundary-profile",
]
NORMAL_EXPECT = {
    "normal-symbol": "CONSISTENT",
    "hyponormality": "NORMAL_CONSISTENT",
    "kernel-defect": "CONSISTENT",
    "kernel-modulus": "CONSISTENT",
    "eigen-weight": "FIXED",
    "boundary-profile": "CONSTANT",
}

HYPERBOLIC_MAPS = [  # attracting angle, repelling angle, multiplier
    (0.0, math.pi, 1 / 3),
    (math.pi / 2, -math.pi / 2, 0.5),
    (0.3, 0.3 + math.pi, 0.6),
    (1.0, 1.0 + 2 * math.pi / 3, 0.5),
    (-2.0, -2.0 - 2 * math.pi / 3, 0.4),
    (2.5, -0.5, 0.45),
    (-1.0, 2.0, 0.7),
    (0.8, 0.8 + math.pi / 2, 0.6),
    (-0.4, 2.6, 0.55),
    (3.0, 1.2, 0.65),
]

PARABOLIC_MAPS = [  # fixed point angle, imaginary translation number
    (0.0, 1.0),
    (math.pi / 3, -1.0),
    (2.0, 0.5),
    (-1.2, 1.5),
    (math.pi, -0.75),
    (1.0, 0.8),
    (-2.5, -1.2),
    (0.5, 1.25),
    (2.8, -0.6),
    (-0.3, 0.4),
]

SPACES = [HARDY, BERGMAN_0, BERGMAN_1]


def _unit(angle):
    return [math.cos(angle), math.sin(angle)]


def _hyperbolic(attracting, repelling, multiplier):
    return {"type": "hyperbolic", "attracting": _unit(attracting), "repelling": _unit(repelling),
            "multiplier": multiplier}


def _parabolic(angle, y, x=0.0):
    return {"type": "parabolic", "zeta": _unit(angle), "t": [x, y]}


def _kernel(w):
    return {"type": "kernel", "w": [w, 0]}


def _battery(name, maps, psi, checks, expect):
    return [
        {
            "name": f"{name}-{i}",
            "space": SPACES[i % len(SPACES)],
            "phi": phi,
            "psi": psi,
            "N": 256,
            "M": 32,
            "checks": checks,
            "expect": expect,
        }
        for i, phi in enumerate(maps)
    ]


PRESETS = {
    "lemma21-battery": {
        "claim": "C* K_w = conj(psi(w)) K_{phi(w)}: 50 random cases, finite-section residual <= 1e-8 at N = 256",
        "scenarios": [
            {"name": "battery", "space": HARDY, "phi": HALF_DISK_SHIFT, "psi": ONE, "N": 256,
             "checks": ["kernel-adjoint-battery"], "expect": {"kernel-adjoint-battery": "CONSISTENT"}},
        ],
    },
    "prop32-kernel": {
        "claim": "psi = K_a with a boundary Denjoy-Wolff point: (1 - |phi(a)|^2)(1 + |a|)/(1 - |a|) < phi'(zeta) "
                 "certifies the operator is not normaloid",
        "scenarios": [
            {"name": "parabolic-a0", "space": HARDY, "phi": PARABOLIC_T1, "psi": _kernel(0),
             "checks": ["normaloid-inequality"], "expect": {"normaloid-inequality": "VIOLATED"}},
            {"name": "hyperbolic-normal", "space": HARDY, "phi": HALF_DISK_SHIFT, "psi": KERNEL_MINUS_HALF,
             "checks": ["normaloid-inequality"], "expect": {"normaloid-inequality": "CONSISTENT"}},
            {"name": "interior", "space": HARDY, "phi": HALF, "psi": _kernel(0),
             "checks": ["normaloid-inequality"], "expect": {"normaloid-inequality": "NOT_APPLICABLE"}},
        ],
    },
    "cor33-parabolic": {
        "claim": "C_phi with phi'(zeta) = 1 is not normaloid: |K_{phi(0)}| > 1 = r",
        "scenarios": [
            {"name": f"t={t}", "space": HARDY, "phi": _parabolic(0.0, 0.0, t), "psi": ONE,
             "samples": [[0, 0]], "checks": ["spectral-radius", "normaloid"],
             "expect": {"spectral-radius": "CONSISTENT", "normaloid": "NOT_NORMALOID"}}
            for t in (0.5, 1.0, 2.0)
        ],
    },
    "prop34-kernel": {
        "claim": "psi = K_a: cohyponormal needs |phi(0)| >= |a|, hyponormal needs <=, normal needs equality",
        "scenarios": [
            {"name": "hyperbolic-normal", "space": HARDY, "phi": HALF_DISK_SHIFT, "psi": KERNEL_MINUS_HALF,
             "N": 256, "M": 32, "checks": ["hyponormality", "kernel-modulus"],
             "expect": {"hyponormality": "NORMAL_CONSISTENT", "kernel-modulus": "CONSISTENT"}},
            {"name": "parabolic-a-half", "space": HARDY, "phi": PARABOLIC_T1, "psi": _kernel(0.5),
             "checks": ["kernel-modulus"], "expect": {"kernel-modulus": "CONSISTENT"}},
        ],
    },
    "cor35-parabolic": {
        "claim": "psi = K_a, phi parabolic non-automorphism: normal only if |a| = |t/(2+t)| = |sigma(0)|",
        "scenarios": [
            {"name": f"|a|={a:.4g}", "space": HARDY, "phi": PARABOLIC_T1, "psi": _kernel(a),
             "checks": ["parabolic-kernel"], "expect": {"parabolic-kernel": verdict}}
            for a, verdict in ((0.2, "NORMAL_RULED_OUT"), (1 / 3, "NORMAL_NOT_RULED_OUT"), (0.5, "NORMAL_RULED_OUT"))
        ] + [
            {"name": "automorphism", "space": HARDY, "phi": _parabolic(0.0, 2.0), "psi": _kernel(0.5),
             "checks": ["parabolic-kernel"], "expect": {"parabolic-kernel": "NotParabolicNonAutomorphism"}},
        ],
    },
    "lemma31-radius": {
        "claim": "r(C_{psi,phi}) = |psi(zeta)| phi'(zeta)^(-gamma/2) at a boundary Denjoy-Wolff point",
        "scenarios": [
            {"name": "composition", "space": HARDY, "phi": HALF_DISK_SHIFT, "psi": ONE, "N": 128, "k_max": 32,
             "checks": ["spectral-radius"], "expect": {"spectral-radius": "CONSISTENT"}},
            {"name": "kernel-weight", "space": HARDY, "phi": HALF_DISK_SHIFT, "psi": KERNEL_MINUS_HALF,
             "N": 128, "k_max": 32, "checks": ["spectral-radius", "normaloid"],
             "expect": {"spectral-radius": "CONSISTENT", "normaloid": "NORMALOID_CONSISTENT"}},
        ],
    },
    "prop42-profile": {
        "claim": "phi automorphism: hyponormal gives |w| >= |w o phi| on the circle, cohyponormal the reverse",
        "scenarios": [
            {"name": "normal", "space": HARDY, "phi": HALF_DISK_SHIFT, "psi": KERNEL_MINUS_HALF,
             "N": 256, "M": 32, "checks": ["hyponormality", "boundary-profile"],
             "expect": {"hyponormality": "NORMAL_CONSISTENT", "boundary-profile": "CONSTANT"}},
            {"name": "profile-only", "space": HARDY, "phi": HALF_DISK_SHIFT,
             "psi": {"type": "poly", "coeffs": [[1, 0], [0.25, 0]]}, "checks": ["boundary-profile"],
             "expect": {"boundary-profile": "CONSISTENT"}},
        ],
    },
    "prop43-boundary-zero": {
        "claim": "a boundary zero of psi must be a fixed point of phi other than the Denjoy-Wolff point",
        "scenarios": [
            {"name": "repelling-zero", "space": HARDY, "phi": HALF_DISK_SHIFT,
             "psi": {"type": "poly", "coeffs": [[1, 0], [1, 0]]}, "checks": ["boundary-zero"],
             "expect": {"boundary-zero": "CONSISTENT"}},
            {"name": "attracting-zero", "space": HARDY, "phi": HALF_DISK_SHIFT,
             "psi": {"type": "poly", "coeffs": [[1, 0], [-1, 0]]}, "checks": ["boundary-zero"],
             "expect": {"boundary-zero": "VIOLATED"}},
            {"name": "parabolic-zero", "space": HARDY, "phi": _parabolic(0.0, 1.0),
             "psi": {"type": "poly", "coeffs": [[1, 0], [-1, 0]]}, "checks": ["boundary-zero"],
             "expect": {"boundary-zero": "VIOLATED"}},
        ],
    },
    "prop44-eigenweight": {
        "claim": "normal C_{psi,phi} with phi non-elliptic automorphism: w o phi = w",
        "scenarios": [
            {"name": "hyperbolic-normal", "space": HARDY, "phi": HALF_DISK_SHIFT, "psi": KERNEL_MINUS_HALF,
             "checks": ["eigen-weight"], "expect": {"eigen-weight": "FIXED"}},
            {"name": "parabolic-normal", "space": HARDY, "phi": _parabolic(0.0, 2.0), "psi": NORMAL,
             "checks": ["eigen-weight"], "expect": {"eigen-weight": "FIXED"}},
            {"name": "not-normal", "space": HARDY, "phi": HALF_DISK_SHIFT,
             "psi": {"type": "poly", "coeffs": [[1, 0], [1, 0]]}, "checks": ["eigen-weight"],
             "expect": {"eigen-weight": "NOT_FIXED"}},
        ],
    },
    "thm45-hyperbolic": {
        "claim": "phi hyperbolic automorphism: C_{psi,phi} is normal for psi = psi(0) K_{sigma(0)}",
        "scenarios": _battery("hyperbolic", [_hyperbolic(*m) for m in HYPERBOLIC_MAPS], NORMAL,
                              NORMAL_CHECKS, NORMAL_EXPECT),
    },
    "thm45-parabolic": {
        "claim": "phi parabolic automorphism: C_{psi,phi} is normal for psi = psi(0) K_{sigma(0)}",
        "scenarios": _battery("parabolic", [_parabolic(*m) for m in PARABOLIC_MAPS], NORMAL,
                              NORMAL_CHECKS, NORMAL_EXPECT),
    },
    "thm45-perturbed": {
        "claim": "psi = psi(0) K_{sigma(0)} is the only normal weight: adding 0.1 z moves the commutator "
                 "and kernel defect past 1e-3",
        "scenarios": _battery(
            "perturbed",
            [_hyperbolic(*HYPERBOLIC_MAPS[0]), _parabolic(*PARABOLIC_MAPS[0])],
            PERTURBED_NORMAL,
            ["kernel-defect", "normality-gap"],
            {"kernel-defect": "VIOLATED", "normality-gap": "SEPARATED"},
        ),
    },
    "thm47-parabolic": {
        "claim": "normal C_{psi,phi} with phi parabolic automorphism: |w| is constant on the circle",
        "scenarios": _battery("parabolic", [_parabolic(*m) for m in PARABOLIC_MAPS[:3]], NORMAL,
                              ["boundary-profile"], {"boundary-profile": "CONSTANT"}),
    },
    "lemma46-orbit": {
        "claim": "phi non-elliptic: a finite orbit of a boundary point is the fixed point",
        "scenarios": [
            {"name": "fixed", "space": HARDY, "phi": HALF_DISK_SHIFT, "psi": ONE,
             "orbit": {"z0": [1, 0], "n_max": 50}, "checks": ["orbit"], "expect": {"orbit": "FINITE"}},
            {"name": "attracted", "space": HARDY, "phi": HALF_DISK_SHIFT, "psi": ONE,
             "orbit": {"z0": [0, 0], "n_max": 50}, "checks": ["orbit"], "expect": {"orbit": "INFINITE"}},
            {"name": "rotation", "space": HARDY, "phi": QUARTER_TURN, "psi": ONE,
             "orbit": {"z0": [1, 0], "n_max": 50}, "checks": ["orbit"], "expect": {"orbit": "FINITE"}},
        ],
    },
    "thm48-bounded-below": {
        "claim": "bounded below, Fredholm and invertible coincide; probed by sigma_min of finite sections",
        "scenarios": [
            {"name": "automorphism", "space": HARDY, "phi": HALF_DISK_SHIFT, "psi": ONE, "orders": [32, 64, 128],
             "checks": ["bounded-below", "invertibility"],
             "expect": {"bounded-below": "BOUNDED_BELOW_CONSISTENT", "invertibility": "INVERTIBLE"}},
            {"name": "contraction", "space": HARDY, "phi": HALF, "psi": ONE, "orders": [32, 64, 128],
             "checks": ["bounded-below", "invertibility"],
             "expect": {"bounded-below": "NOT_BOUNDED_BELOW_CONSISTENT", "invertibility": "NOT_INVERTIBLE"}},
        ],
    },
}
