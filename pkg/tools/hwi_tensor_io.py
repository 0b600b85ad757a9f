#!/usr/bin/env python3
"""
Tensor files, generator specs and report emission
=================================================

Tensor JSON:
    {"n": 4, "components": [{"i": 0, "j": 1, "k": 0, "l": 1, "value": "1/2"}, ...]}
R(e_i, e_j; e_k, e_l) with 0-based i < j and k < l. Listing one of a
symmetric pair is enough; the loader fills in the other, rejects
conflicting values and checks the first Bianchi identity (exactly for
rational values).

Generator specs (used by `invariants --product` and `export`):
    sphere:N:LAMBDA  hypersurface:L1,L2,...  conformal:H1,H2,...
    flat:N  random:N:SEED[:TERMS]  file:PATH

Numbers in reports: Fraction values become {"exact": "num/den", "float": x};
plain ints (dimensions, counts, seeds) are written as JSON integers.
"""

import json
import logging
import math
from dataclasses import asdict, is_dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np
import yaml

from hwi_curvature import CurvatureTensor
from hwi_dfcore import DoubleForm, exact
from hwi_errors import DimensionError, TensorFileError
from hwi_models import conformally_flat, constant_curvature, flat, hypersurface, parse_values, random_bianchi

log = logging.getLogger(__name__)

FORMATS = ('json', 'yaml')


# ---------------------------------------------------------------------------
# numeric emission

def scalar_payload(value) -> Any:
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, Fraction):
        return {'exact': f'{value.numerator}/{value.denominator}', 'float': float(value)}
    if isinstance(value, (float, np.floating)):
        return float(f'{float(value):.17g}')
    return value


def to_jsonable(obj: Any) -> Any:
    if is_dataclass(obj) and not isinstance(obj, type):
        return to_jsonable(asdict(obj))
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return scalar_payload(obj)


def render(payload: Dict, fmt: str = 'json') -> str:
    data = to_jsonable(payload)
    if fmt == 'yaml':
        return yaml.safe_dump(data, allow_unicode=True, sort_keys=False)
    if fmt == 'json':
        return json.dumps(data, ensure_ascii=False, indent=2)
    raise ValueError(f'unknown format {fmt!r}')


def emit(payload: Dict, fmt: str = 'json', out: Optional[Path] = None) -> None:
    text = render(payload, fmt)
    if out:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text + '\n', encoding='utf-8')
    else:
        print(text)


# ---------------------------------------------------------------------------
# tensor JSON

def _parse_value(raw) -> Fraction:
    if isinstance(raw, bool):
        raise TensorFileError(f'invalid component value {raw!r}')
    if isinstance(raw, float):
        if not math.isfinite(raw):
            raise TensorFileError(f'invalid component value {raw!r}')
        return Fraction(repr(raw))
    try:
        return Fraction(str(raw).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise TensorFileError(f'invalid component value {raw!r}') from e


def tensor_from_payload(payload: Dict, label: str = 'file') -> CurvatureTensor:
    if not isinstance(payload, dict) or 'n' not in payload:
        raise TensorFileError('tensor JSON needs an object with "n" and "components"')
    n = payload['n']
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise TensorFileError(f'"n" must be an integer >= 2, got {n!r}')
    components = payload.get('components', [])
    if not isinstance(components, list):
        raise TensorFileError('"components" must be a list')

    entries: Dict = {}
    for pos, comp in enumerate(components):
        try:
            i, j, k, l = (comp[key] for key in ('i', 'j', 'k', 'l'))
            value = _parse_value(comp['value'])
        except (KeyError, TypeError) as e:
            raise TensorFileError(f'component #{pos}: missing field {e}') from e
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in (i, j, k, l)):
            raise TensorFileError(f'component #{pos}: indices must be integers')
        if not (i < j and k < l):
            raise TensorFileError(f'component #{pos}: needs i < j and k < l, got ({i},{j},{k},{l})')
        if min(i, k) < 0 or max(j, l) >= n:
            raise TensorFileError(f'component #{pos}: index out of range for n={n}')
        for key in (((i, j), (k, l)), ((k, l), (i, j))):
            previous = entries.get(key)
            if previous is not None and previous != value:
                raise TensorFileError(
                    f'component #{pos}: R({key[0]};{key[1]}) given as both {previous} and {value}')
            entries[key] = value

    try:
        form = DoubleForm.from_entries(n, 2, 2, entries)
    except DimensionError as e:
        raise TensorFileError(str(e)) from e
    tensor = CurvatureTensor(form, label=label)
    log.debug('loaded %s: n=%d, %d components', label, n, len(components))
    return tensor


def load_tensor(path: Path) -> CurvatureTensor:
    try:
        payload = json.loads(Path(path).read_text(encoding='utf-8'))
    except (OSError, json.JSONDecodeError) as e:
        raise TensorFileError(f'cannot read tensor file {path}: {e}') from e
    return tensor_from_payload(payload, label=f'file:{Path(path).name}')


def tensor_to_payload(R: CurvatureTensor) -> Dict:
    components = []
    for (i, j), (k, l), v in R.form.entries():
        if (i, j) > (k, l):
            continue
        v = Fraction(v)
        components.append({'i': i, 'j': j, 'k': k, 'l': l, 'value': f'{v.numerator}/{v.denominator}'})
    return {'n': R.n, 'label': R.label, 'components': components}


def export_tensor(R: CurvatureTensor, path: Optional[Path] = None) -> str:
    text = json.dumps(tensor_to_payload(R), ensure_ascii=False, indent=2)
    if path:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text + '\n', encoding='utf-8')
    return text


# ---------------------------------------------------------------------------
# generator specs

def _int_field(text: str, what: str) -> int:
    try:
        return int(text)
    except ValueError as e:
        raise TensorFileError(f'{what} must be an integer, got {text!r}') from e


def parse_generator(spec: str) -> CurvatureTensor:
    kind, _, rest = spec.strip().partition(':')
    parts = rest.split(':') if rest else []
    try:
        if kind == 'sphere' and len(parts) == 2:
            return constant_curvature(_int_field(parts[0], 'sphere dimension'), exact(parts[1]))
        if kind == 'flat' and len(parts) == 1:
            return flat(_int_field(parts[0], 'dimension'))
        if kind == 'hypersurface' and len(parts) == 1:
            return hypersurface(parse_values(parts[0]))
        if kind == 'conformal' and len(parts) == 1:
            return conformally_flat(parse_values(parts[0]))
        if kind == 'random' and len(parts) in (2, 3):
            terms = _int_field(parts[2], 'terms') if len(parts) == 3 else 3
            return random_bianchi(_int_field(parts[0], 'dimension'), _int_field(parts[1], 'seed'), terms)
        if kind == 'file' and rest:
            return load_tensor(Path(rest))
    except (ValueError, ZeroDivisionError) as e:
        raise TensorFileError(f'cannot parse generator spec {spec!r}: {e}') from e
    raise TensorFileError(f'unknown generator spec {spec!r} '
                          '(expected sphere:N:L, flat:N, hypersurface:..., conformal:..., random:N:SEED, file:PATH)')
