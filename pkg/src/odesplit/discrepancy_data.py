"""Frozen records of where computation disagrees with the transcriptions.

The files under tests/golden/ transcribe a set of reference systems and
operator tables. Direct computation with this package contradicts a few
of them. Every such point is recorded here with the exact computed
artifact, and docs/discrepancies.md renders the same records as prose.
tests/test_discrepancies.py recomputes every record from scratch, so
the catalog can never drift away from what the engine actually yields.

Each record is a plain dict:
  id         stable slug, also the heading anchor in the docs
  summary    one-line statement of the disagreement
  reference  what the transcribed material asserts
  computed   frozen machine-checkable artifacts
"""

# Building blocks for the four-independent-variable source terms. The
# reference writes its sources through two quadratic forms in the
# independent variables and four first-derivative combinations.
FOUR_INDEP_A = "(s^2 - t^2 + u^2 - v^2)"
FOUR_INDEP_B = "(2*s*t + 2*u*v)"
FOUR_INDEP_C = "(-5/(%s^2 + %s^2))" % (FOUR_INDEP_A, FOUR_INDEP_B)

_ALPHA = "(w_s + x_t + y_u + z_v)"
_BETA = "(w_t - x_s + y_v - z_u)"
_GAMMA = "(w_u + x_v - y_s - z_t)"
_DELTA = "(w_v - x_u - y_t + z_s)"

_SA_TB = "(s*%s + t*%s)" % (FOUR_INDEP_A, FOUR_INDEP_B)
_TA_SB = "(t*%s - s*%s)" % (FOUR_INDEP_A, FOUR_INDEP_B)
_UA_VB = "(u*%s + v*%s)" % (FOUR_INDEP_A, FOUR_INDEP_B)
_VA_UB = "(v*%s - u*%s)" % (FOUR_INDEP_A, FOUR_INDEP_B)

# Row-wise correction terms: recipe RHS minus transcribed RHS equals
# -8*C*Q + 12*P. Row 1's Q is the (u,v)-half of its transcribed source
# bracket; rows 2-4 take the (s,t)-half. P is the polynomial tail of
# the transcribed source.
FOUR_INDEP_SOURCE_Q = (
    "(%s*%s + %s*%s)" % (_GAMMA, _UA_VB, _DELTA, _VA_UB),
    "(%s*%s - %s*%s)" % (_BETA, _SA_TB, _ALPHA, _TA_SB),
    "(%s*%s + %s*%s)" % (_GAMMA, _SA_TB, _DELTA, _TA_SB),
    "(-%s*%s + %s*%s)" % (_DELTA, _SA_TB, _GAMMA, _TA_SB),
)
FOUR_INDEP_SOURCE_P = (
    "(-w^2 + x^2 + y^2 - z^2)",
    "(-2*w*x + 2*y*z)",
    "(-2*w*y + 2*x*z)",
    "(-2*w*z - 2*x*y)",
)

DISCREPANCIES = (
    {
        "id": "three-component-recipe",
        "summary": "the transcribed three-component systems are not the"
        " recipe images of their base equations",
        "reference": "tests/golden/three_power_printed.txt and"
        " tests/golden/three_emden_printed.txt present three-component"
        " systems, with a quadric constraint, as the split images of the"
        " power-law and radial base equations",
        "computed": {
            "power_recipe_fixture": "tests/derived/three_power_recipe.txt",
            "emden_recipe_fixture": "tests/derived/three_emden_recipe.txt",
            "power_recipe_residuals": ("(y^2 - z^2)/s^5", "2*y*z/s^5"),
            "emden_recipe_residuals": ("-y^2 + z^2", "-2*y*z"),
        },
    },
    {
        "id": "pure-scaling-verdict",
        "summary": "the displayed pure-scaling operator is not a symmetry"
        " of the transcribed three-component power system",
        "reference": "the operator pair displayed for the three-component"
        " power system (tests/gens/three_power_printed_pair.txt) is"
        " presented as its symmetries; the first member scales only the"
        " dependents",
        "computed": {
            "first_is_symmetry": False,
            "first_residuals": ("2*y*z/s^5", "2*x*z/s^5", "2*x*y/s^5"),
            "second_is_symmetry": True,
        },
    },
    {
        "id": "split-operator-census",
        "summary": "the operator census for the double split of the full"
        " free-particle algebra counts one symmetry too few",
        "reference": "splitting all 8 projective generators of the scalar"
        " free equation into the three-component free system is stated to"
        " give 23 distinct operators, 15 of them symmetries and 8 of them"
        " failing the symmetry condition, closing into a 24-dimensional"
        " algebra",
        "computed": {
            "distinct_operators": 23,
            "symmetries": 16,
            "lie_like": 7,
            "closure_dimension": 24,
        },
    },
    {
        "id": "power-pair-images",
        "summary": "two of the eight images of the power-law symmetry pair"
        " are symmetries of the transcribed three-component system",
        "reference": "none of the 8 split images of the power-law pair"
        " (tests/gens/power_scalar_pair.txt) are said to satisfy the"
        " symmetry condition for the transcribed three-component system",
        "computed": {
            "operators": 8,
            "symmetries": 2,
            "symmetric_operators": (
                "s*d_s + 3*x*d_x + 3*y*d_y + 3*z*d_z",
                "s^2*d_s + s*x*d_x + s*y*d_y + s*z*d_z",
            ),
            "note": "the second symmetric image is itself the second"
            " member of the displayed operator pair for that system",
        },
    },
    {
        "id": "emden-scaling-images",
        "summary": "one of the four images of the radial scaling symmetry"
        " is a symmetry of the four-component system",
        "reference": "none of the 4 split images of the scaling symmetry"
        " (tests/gens/emden_scalar_scaling.txt) are said to satisfy the"
        " symmetry condition for the four-component system"
        " (tests/golden/four_emden.txt)",
        "computed": {
            "operators": 4,
            "symmetries": 1,
            "symmetric_operators": (
                "s*d_s -2*w*d_w -2*x*d_x -2*y*d_y -2*z*d_z",
            ),
            "note": "the symmetric image coincides with the displayed"
            " scaling symmetry of the system itself"
            " (tests/gens/four_emden_scaling.txt)",
        },
    },
    {
        "id": "four-indep-second-order-terms",
        "summary": "the transcribed four-independent-variable left-hand"
        " sides differ from the recipe in their mixed second derivatives",
        "reference": "tests/golden/emden_pde4x4_printed.txt transcribes"
        " the four-equation system over (s,t,u,v)",
        "computed": {
            "recipe_fixture": "tests/derived/emden_pde4x4_recipe.txt",
            "lhs_deltas": (
                "-2*z_tu + 2*z_tv",
                "2*y_tu - 2*y_tv",
                "4*w_su - 4*w_tv + 4*x_sv + 2*x_tu + 2*x_tv",
                "-4*w_sv - 2*w_tu - 2*w_tv + 4*x_su - 4*x_tv",
            ),
        },
    },
    {
        "id": "four-indep-source-terms",
        "summary": "the transcribed four-independent-variable source terms"
        " cannot be rescaled into the recipe sources",
        "reference": "tests/golden/emden_pde4x4_printed.txt carries source"
        " terms scaled by 4; the recipe produces the full sixteen-fold"
        " image of the base right-hand side",
        "computed": {
            "reference_factor": 4,
            "recipe_factor": 16,
            "delta_rule": "recipe RHS minus transcribed RHS ="
            " -8*C*Q + 12*P per row",
            "C": FOUR_INDEP_C,
            "Q": FOUR_INDEP_SOURCE_Q,
            "P": FOUR_INDEP_SOURCE_P,
        },
    },
    {
        "id": "condition-catalog-typos",
        "summary": "three isolated slips in the transcribed exactness"
        " conditions, plus one wholly misprinted block",
        "reference": "the transcribed condition tables for the"
        " four-component two-variable split, the four-variable split, and"
        " the dual three-component split",
        "computed": {
            "kind_deviation_ids": {
                "ode2": (),
                "pde2": (),
                "ode3": (),
                "ode3-dual": ("dep.1", "dep.2", "vel.1", "vel.2"),
                "ode4": (),
                "pde4x2": ("dep.7",),
                "pde4x2-dual": (),
                "pde4x4": ("sol.3",),
            },
            "pde4x2_definition_deviation": "def.c2",
        },
    },
    {
        "id": "combination-sign-convention",
        "summary": "the analyticity conditions in the derivative"
        " combinations carry a systematic sign slip",
        "reference": "the transcribed derivative-combination conditions"
        " pair the second combination with a positive cross term; solving"
        " the chain rule for the combinations forces the opposite sign",
        "computed": {
            "dependence_deviation_ids": {
                "pde2": ("comb.1", "comb.2"),
                "pde4x2": ("def.c2", "comb.1", "comb.2", "comb.3", "comb.4"),
                "pde4x2-dual": ("comb.1", "comb.2", "comb.3", "comb.4"),
                "pde4x4": ("comb.1", "comb.2", "comb.3", "comb.4"),
            },
        },
    },
    {
        "id": "cone-constraint-drift",
        "summary": "the transcribed three-component power system does not"
        " preserve its own quadric constraint",
        "reference": "tests/golden/three_power_printed.txt couples its"
        " equations to the constraint x^2 + y^2 = z^2, so solutions"
        " starting on the quadric would have to stay on it",
        "computed": {
            "initial": {
                "x": 0.3, "y": 0.4, "z": 0.5,
                "x'": 0.0, "y'": 0.0, "z'": 0.0,
            },
            "grid": (1.0, 1e-3, 1000),
            "max_drift": 0.03602970800968361,
            "tolerance": 1e-12,
        },
    },
)


def by_id(slug):
    """Look up one discrepancy record by its id."""
    for record in DISCREPANCIES:
        if record["id"] == slug:
            return record
    raise KeyError(slug)
