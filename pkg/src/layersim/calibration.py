"""Frozen experiment constants with provenance.

Three provenance classes appear in reports and verdicts:
  * "paper"         — a value the source analysis states outright,
  * "trivial"       — forced by counting or by the definitions,
  * "derived-pilot" — calibrated once from pilot runs and frozen here.

Pilot-derived numbers record what the pilots saw so the margin is auditable.
"""

# master seed for the acceptance suite and default for the CLI
DEFAULT_SEED = 20240808

# Largest-component threshold for T_3 on the cycle-plus-matching family.
# Only existence of a positive constant is guaranteed; pilots at n = 10^4
# saw fractions 0.65-0.68, so 0.01 (the acceptance-pinned value) has ~65x
# headroom.  provenance: derived-pilot
GIANT_T3_DELTA = 0.01

# Percolation on random 3-regular graphs at p = 0.6 (supercritical: p > 1/2).
# Pilots at n = 10^4 saw giant fractions 0.37-0.42; frozen at 0.1 (3.7x
# margin).  provenance: derived-pilot
PERC_SUPER_DELTA = 0.10

# Subcritical p = 0.3: pilots saw largest fractions <= 0.003; the acceptance
# bound 0.01 is spec-pinned.  provenance: derived-pilot
PERC_SUB_MAX_FRACTION = 0.01

# Two-stage exposure at (p, q) = (0.6, 0.8): stage-p giant fractions matched
# plain percolation at 0.6 (pilot min 0.38), so the same threshold applies.
# provenance: derived-pilot
TWO_STAGE_DELTA = 0.10

# Diameter coefficient for non-giant components of T_4 boxes: the bound is
# SECOND_DIAMETER_COEFF * ln(n).  Pilot max extent at n = 200 was 4 against
# 3.0 * ln(200) = 15.9 (~4x margin).  provenance: derived-pilot
SECOND_DIAMETER_COEFF = 3.0

# Stabilization tolerances for the box-scaling experiment (acceptance-pinned).
THETA_STABILITY_TOL = 0.02
FRACTION_STABILITY_TOL = 0.01

# Monotone-component log fit on random 3-regular graphs: pilots at
# n = 2^10..2^16 gave c = median / ln(n) in [3.3, 3.7]; the stability verdict
# allows max/min <= 1.5.  provenance: derived-pilot
LOGFIT_MAX_RATIO = 1.5

# Applicability guard for the giant-component criterion on the auxiliary
# multigraph: its maximum degree (largest cycle run) must stay within
# MR_GUARD_COEFF * log2(n); runs beyond that void the verdict rather than
# fail it.  provenance: derived-pilot
MR_GUARD_COEFF = 4.0
