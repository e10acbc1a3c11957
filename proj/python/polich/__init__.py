# Copyright 2026 The Polich Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


"""Constrained decoding of Boolean expression trees.

Tokens are plain strings ("Q0", "and", "or", "not", "(", ")"). A session
tracks one decode stream and must not be shared across threads.
"""

from ._polich import (
    BadConfig,
    ClosedSession,
    IllegalToken,
    Incomplete,
    ParseError,
    Session,
    close_session,
    equivalent,
    finish,
    is_valid,
    open_session,
    step,
    version,
)

__version__ = version()

__all__ = [
    "BadConfig",
    "ClosedSession",
    "IllegalToken",
    "Incomplete",
    "ParseError",
    "Session",
    "close_session",
    "equivalent",
    "finish",
    "is_valid",
    "open_session",
    "step",
    "version",
]
