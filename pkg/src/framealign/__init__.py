"""Simulation toolkit for aligning spatial reference frames between two
parties by exchanging spin-1/2 systems.

The protocols estimate the Euler angles relating the parties' frames by
bouncing single spins back and forth (doubling the rotation each level),
by Fourier phase estimation on a small register, or by the introductory
single-shot schemes; everything is deterministic given a master seed and
every transmission is accounted in a communication ledger.
"""

from .frames import (AXIS_X, AXIS_Y, AXIS_Z, AxisPair, DegenerateInput,
                     EulerAngles, FractionT, IntervalEstimate, euler_from_columns,
                     fidelity, overlap, random_frame, so3_matrix, t_from_theta)
from .runtime import (CommLedger, RngStream, Session, forward_spin, round_trip,
                      round_trip_z, send_cbits)
from .iterative import (OverlapEstimate, StageEstimate, chernoff_n,
                        estimate_cosine_level, estimate_euler, estimate_overlap,
                        estimate_theta, find_direction, sew_fraction, sew_levels)
from .qpe import (QpeCost, QpeRegister, fold_outcome, qpe_ledger, register_size,
                  run_qpe, run_register)
from .vignettes import (ConvergenceFailure, VignetteResult, antiparallel_pair,
                        antiparallel_two_backward, entangled_sigma_z,
                        feedforward_objective, forward_spins_avg,
                        optimize_feedforward, singlet_steering)
from .analysis import (FidelityReport, SweepRow, adversarial_grid, emit,
                       fidelity_bound, fit_scaling_slope, scaling_sweep)

__version__ = "0.1.0"
