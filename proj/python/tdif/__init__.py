from tdif._tdif import *  # noqa: F401,F403
