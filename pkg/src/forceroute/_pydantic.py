# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: 2026, forceroute contributors

"""
Helpers for pydantic.
"""

from __future__ import annotations

import typing as t

import pydantic


def _format_error(error: t.Mapping[str, t.Any]) -> str:
    location = " -> ".join(str(loc) for loc in error["loc"])
    if not location:
        return str(error["msg"])
    return f"{location}: {error['msg']}"


def get_formatted_error_messages(error: pydantic.ValidationError) -> list[str]:
    """
    Render every validation error as ``loc -> loc: message``.
    """
    return [_format_error(err) for err in error.errors()]


__all__ = ("get_formatted_error_messages",)
