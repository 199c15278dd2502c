"""Single source of truth for numerical defaults.

==================  =========  ==================================================
name                value      used by
==================  =========  ==================================================
EPS                 0.01       slack epsilon in far-ball and competitor searches
QUAD_ABS_TOL        1e-10      absolute target of the adaptive 1-D quadratures
MC_SAMPLES          1_000_000  Monte-Carlo sample budget per measure
SPHERE_NODES        64         Gauss nodes per angle on sphere grids
RADIAL_NODES        64         Gauss nodes along radial directions
SCAN_STEP           0.25       sliding-search grid step in the offset R
DIRECTION_NODES     360        direction-grid size for far-ball selection
CIRCLE_GRID         720        working-circle grid for the sweep-advance map
GRID_REFINE         4          grid refinement factor on scan failure
REFINE_ROUNDS       2          refinement rounds before reporting failure
VOLUME_RTOL         1e-8       relative tolerance of volume matching
ENDPOINT_MARGIN     1e-6       kernel grids stay inside |t| <= 1 - margin
REPORT_CLIP         1e-9       clip for tabulated exact kernels near t = +-1
DEGENERACY_TOL      0.0        deficits sampled exactly zero count as vanished
==================  =========  ==================================================

Deficit degeneracy is exact on purpose: registered families carry closed-form
deficits that stay meaningful far below the weight's rounding floor, so a
sampled tail counts as identically zero only when every sample is 0.0.
"""

EPS = 0.01
QUAD_ABS_TOL = 1e-10
MC_SAMPLES = 1_000_000
SPHERE_NODES = 64
RADIAL_NODES = 64
SCAN_STEP = 0.25
DIRECTION_NODES = 360
CIRCLE_GRID = 720
GRID_REFINE = 4
REFINE_ROUNDS = 2
VOLUME_RTOL = 1e-8
ENDPOINT_MARGIN = 1e-6
REPORT_CLIP = 1e-9
DEGENERACY_TOL = 0.0

SCHEMA_VERSION = 1
