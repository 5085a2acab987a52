"""
This is a module of small helpers shared by the analysis modules and the CLI.
"""
from types import MappingProxyType
from typing import Any

from omalib.exceptions.exception import ArgsError


def protect(value: Any) -> Any:
    """
    ## Summary
    Return a read-only view of nested dictionaries and lists.

    ## Args:
    - value (Any):
        dict, list, tuple or a scalar.

    ## Returns:
    - Any: MappingProxyType for dicts, tuple for lists, the value otherwise.
    """
    if isinstance(value, dict):
        return MappingProxyType({_key: protect(_value) for _key, _value in value.items()})
    if isinstance(value, (tuple, list)):
        return tuple(protect(_item) for _item in value)
    return value


def parabolic_vertex(left: float, center: float, right: float) -> tuple[float, float]:
    """
    ## Summary
    Vertex of the parabola through three equally spaced samples.

    ## Args:
    - left (float): Sample before the maximum.
    - center (float): The maximum sample.
    - right (float): Sample after the maximum.

    ## Returns:
    - tuple[float, float]:
        (offset, value). The offset is in samples relative to the center
        sample and lies in [-0.5, 0.5] when center is a local maximum.
    """
    _denominator = left - 2.0 * center + right
    if _denominator == 0.0:
        return 0.0, center
    _offset = 0.5 * (left - right) / _denominator
    _offset = min(max(_offset, -0.5), 0.5)
    return _offset, center - 0.25 * (left - right) * _offset


def parse_pair(text: str, argument_name: str) -> tuple[float, float]:
    """
    ## Summary
    Parse "LO,HI" into a pair of floats with LO < HI.

    ## Args:
    - text (str): e.g. "1,9"
    - argument_name (str): Used in the error message.

    ## Returns:
    - tuple[float, float]
    """
    _parts = [_part.strip() for _part in str(text).split(',')]
    if len(_parts) != 2:
        raise ArgsError(argument_name=argument_name, add='Expected "LO,HI".')
    try:
        _lo, _hi = float(_parts[0]), float(_parts[1])
    except ValueError as error:
        raise ArgsError(argument_name=argument_name, add=f'Not a number: {text}') from error
    if not _lo < _hi:
        raise ArgsError(argument_name=argument_name, add='LO must be smaller than HI.')
    return _lo, _hi


def parse_orders(text: str, argument_name: str = 'orders') -> list[int]:
    """
    ## Summary
    Parse "MIN,MAX,STEP" into the list of model orders (MAX inclusive).

    ## Args:
    - text (str): e.g. "2,40,2"
    - argument_name (str, optional): Used in the error message.

    ## Returns:
    - list[int]
    """
    _parts = [_part.strip() for _part in str(text).split(',')]
    if len(_parts) != 3:
        raise ArgsError(argument_name=argument_name, add='Expected "MIN,MAX,STEP".')
    try:
        _min, _max, _step = (int(_part) for _part in _parts)
    except ValueError as error:
        raise ArgsError(argument_name=argument_name, add=f'Not an integer: {text}') from error
    if _step <= 0 or _min <= 0 or _max < _min:
        raise ArgsError(
            argument_name=argument_name,
            add='Orders must satisfy 0 < MIN <= MAX and STEP > 0.',
        )
    return list(range(_min, _max + 1, _step))
