import os

import hypothesis

hypothesis.settings.register_profile(
    "default", deadline=None, max_examples=50
)
hypothesis.settings.register_profile(
    "thorough", deadline=None, max_examples=300
)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))
