import hashlib
from typing import Any, Iterable, List, Mapping

import jsonpickle
import mmh3


def sort_dict_keys(d):
    """Recursively sort dictionary keys and handle nested structures.

    Args:
        d: Data structure (dict, list, or primitive type)

    Returns:
        Sorted version of the data structure
    """
    if isinstance(d, dict):
        return {key: sort_dict_keys(value) for key, value in sorted(d.items())}
    elif isinstance(d, (list, tuple)):
        return [sort_dict_keys(item) for item in d]
    return d


def canonicalize_dict(data):
    """
    Returns a canonical JSON representation of a dictionary.

    Keys are sorted recursively, so two dictionaries with the same content
    always produce the same string regardless of insertion order.
    """
    return jsonpickle.dumps(sort_dict_keys(data), unpicklable=False)


def compute_hash(data: Any) -> str:
    """Compute a short murmur3/SHA-256 digest of a dict or string."""
    if isinstance(data, dict):
        _data = canonicalize_dict(data)
    elif isinstance(data, str):
        _data = data
    else:
        raise ValueError(f"Hash of {type(data)} is not supported.")
    murmur_str = str(mmh3.hash128(_data))
    return hashlib.sha256(murmur_str.encode("utf-8")).hexdigest()[:16]


def parse_list(value: Any) -> List[str]:
    """Split a comma separated flag value, passing sequences through."""
    if value is None:
        return []
    if isinstance(value, str):
        return [v.strip() for v in value.split(",") if v.strip()]
    return [str(v).strip() for v in value]


def format_binding(binding: Mapping[str, Iterable[str]]) -> str:
    """Render a role binding as ``role=a,b`` pairs joined by ``|``."""
    return "|".join(f"{role}={','.join(ids)}" for role, ids in binding.items())
