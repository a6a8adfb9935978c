import os

from hypothesis import HealthCheck, settings

# Derandomized so the whole suite is reproducible run to run; the profile
# can be swapped via HYPOTHESIS_PROFILE for exploratory fuzzing.
settings.register_profile(
    "suite",
    derandomize=True,
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("fuzz", max_examples=400, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "suite"))
