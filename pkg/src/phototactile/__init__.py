"""Digital twin of an externally mounted photoreflective tactile sensor.

Forward chain: probe indentation -> hyperelastic compression of the silicone
body -> lateral bulge closing the optical gap -> photoreflector voltage.
Inverse chain: voltage -> gap -> indentation -> contact force.
"""

from .calibrate import CalibrationCurve, fit_force_voltage, pigment_select
from .config import Config, load_config
from .errors import (ConfigError, DataError, DomainError, GeometryError, InsufficientDataError,
                     ParameterError, RangeError, SaturationError, SimulationError, TactileError)
from .estimate import ForceEstimate, estimate_forces, force_from_curve, force_from_voltage
from .mechanics import (DeformationState, MaterialParams, SensorGeometry, axial_force,
                        lateral_gap, nominal_stress, strain_energy)
from .optics import (LinearOptics, LookupOptics, PigmentMix, fit_linear, gap_at_voltage,
                     scale_by_pigment, voltage_at_gap)
from .scenarios import (GraspEvent, MotionProfile, SimRecord, cyclic, detect_grasp, hold,
                        make_profile, ramp, simulate)
from .signals import (TimeSeries, dynamic_range, hysteresis_metric, invert_output,
                      moving_average, phase_lag, repeatability, sensitivity)

__version__ = "0.1.0"
