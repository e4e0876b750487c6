"""Pinning a line by disjoint balls: exact pattern checks, first-order
certificates, constructions and a command-line front end."""

__version__ = "0.1.0"

from .balls import (Ball, BallConfig, lift_pattern, project_to_pattern, realize_screens,
                    screens_of, shrink_radii, shrink_toward_touchpoint, validate)
from .engine import (EMPIRICAL, FIRST_ORDER, NOT_PINNED, PATTERN, PinCertificate,
                     clearance_deficit, construct_stable, demo_main_theorem,
                     extract_minimal, find_transversal, grassmann_net, verify_pin)
from .errors import PinningError
from .geometry import TAU, Flat3, LineChart, line_point_distance
from .linespace import (NO_STRICT, STRICT, Screen, ScreenFamily, genericize, in_bad_set,
                        strict_transversal)
from .pattern2d import (HalfplanePattern, is_pinning_pattern, is_sigma5, sigma5,
                        spanning_triples)
