# Tolerances shared by the geometry kernels
TOLERANCES = {
    "IDENTITY": 1e-12,  # exact algebraic identities (all formulas are rational)
    "SOUTH_POLE": 1e-12,  # |v + 1| below which a direction has no chart coordinate
    "FOCAL_DENOMINATOR": 1e-14,  # relative, optical scalar denominator
    "REBASE": 1e-2,  # relative denominator under which r = 0 is treated as focal
    "FLAT": 1e-10,  # |κ| / scale² under which a congruence is flat
    "DOUBLE_ROOT": 1e-10,  # |discriminant| / (1 + θ₀²)²
    "TWIST": 1e-8,  # relative twist allowed before a congruence counts as twisted
    "CLOSURE": 1e-6,  # wavefront loop-closure residual
    "INCIDENCE": 1e-9,  # intersection equation residual accepted by reflect_line
    "REFLECTION_FORMS": 1e-9,  # agreement of the two η reflection formulas
    "SINGULAR_PROFILE": 1e-12,  # |ż₀| below which a profile is singular
    "SOURCE_ON_MIRROR": 1e-24,  # |z₀|² + v² below which the source sits on the mirror
    "DEGENERATE_FOCAL": 1e-12,  # relative, focal-surface denominator
}

DEFAULT_OPTIONS = {
    "FD_STEP": 1e-5,  # finite-difference step, scaled by max(1, |μ|)
    "REBASE": 1.0,  # affine parameter used when r = 0 is focal
    "SCAN_SAMPLES": 64,  # samples of the Jacobian determinant per ray
    "SCAN_WINDOW_SCALE": 10.0,  # r window is ±10 × scene scale
    "SCAN_MAX_WIDENING": 16,  # cap on the sample growth when verify widens the default window
    "BISECTION_XTOL": 1e-10,
    "DOUBLE_ROOT_DET": 1e-8,  # |det| minimum accepted as a tangential root
    "U_SAMPLES": 32,
    "V_SAMPLES": 9,
    "WORKERS": 1,
}

CSV_FLOAT_FORMAT = ".17g"

# Default tolerances of the verify command, overridable per check in the run config
VERIFY_TOLERANCES = {
    "profile_derivatives": 1e-6,
    "unit_normal": 1e-12,
    "source_incidence": 1e-10,
    "closed_form_vs_law": 1e-10,
    "law_vs_oracle_point": 1e-9,
    "law_vs_oracle_direction": 1e-10,
    "angle_law": 1e-12,
    "normal_twist": 1e-9,
    "focal_numeric_vs_closed": 1e-6,
    "closed_vs_numeric": 1e-6,
    "caustic_vs_closed": 1e-6,
    "closed_vs_caustic": 1e-6,
    "caustic_vs_numeric": 1e-6,
}
