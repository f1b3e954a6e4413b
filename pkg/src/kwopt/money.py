"""Exact currency handling in integer micro-units."""

from __future__ import annotations

from decimal import Decimal, InvalidOperation

MICROS = 1_000_000


def to_micros(value: str | int | float | Decimal) -> int:
    """Parse a currency amount to integer micro-units.

    Floats go through their shortest repr so ``0.4`` becomes exactly 400000.
    Sub-micro digits are rejected rather than rounded.
    """
    if isinstance(value, bool):
        raise ValueError(f"not a currency amount: {value!r}")
    if isinstance(value, float):
        value = repr(value)
    try:
        d = Decimal(value) if not isinstance(value, Decimal) else value
    except InvalidOperation:
        raise ValueError(f"not a currency amount: {value!r}") from None
    if not d.is_finite():
        raise ValueError(f"not a currency amount: {value!r}")
    scaled = d.scaleb(6)
    if scaled != scaled.to_integral_value():
        raise ValueError(f"currency amount {value!r} has sub-micro precision")
    return int(scaled)


def format_micros(m: int) -> str:
    """Shortest exact decimal string for a micro-unit amount."""
    sign = "-" if m < 0 else ""
    whole, frac = divmod(abs(m), MICROS)
    frac_s = f"{frac:06d}".rstrip("0")
    return f"{sign}{whole}.{frac_s}" if frac_s else f"{sign}{whole}"


def micros_to_float(m: int) -> float:
    return m / MICROS
