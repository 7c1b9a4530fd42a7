"""
Scenario Files
==============

A scenario is a JSON document describing one run:

    {
      "schema": "open-horizon/scenario/v1",
      "task": "horizon",
      "medium": {"epsilon": 4.0},
      "flow": {"family": "power_law", "direction": "inward",
               "r_min": 0.85, "r_max": 8.0, "beta0": 0.8},
      "length_scale_m": 1e-6,
      "seed": 0,
      "params": {}
    }

The medium is either {"epsilon": eps} or {"modes": [[chi, Omega], ...]}.
Task parameters not given take the defaults in TASK_DEFAULTS. Validation
collects every problem before raising, each tagged with its field path.
"""

import json
import math
from dataclasses import dataclass, field, fields
from typing import Any, Dict, List, Optional, Tuple

from ..core.errors import OpenHorizonError, ScenarioError, ScenarioParseError
from ..core.medium import MediumModel, static_permittivity
from ..flow.profiles import FAMILIES, FlowDirection, FlowProfile


SCHEMA = 'open-horizon/scenario/v1'

TASKS = ('metric', 'horizon', 'geodesic', 'wave', 'dispersion', 'spectrum')

# Tasks that need no flow block
FLOWLESS_TASKS = ('dispersion',)

TASK_DEFAULTS: Dict[str, Dict[str, Any]] = {
    'metric': {
        'n_points': 201,
        'n_samples': 1000,
    },
    'horizon': {},
    'geodesic': {
        'n_inside': 20,
        'n_outside': 20,
        'radii': None,
        'step': 0.05,
        'max_time': 500.0,
        'write_trajectories': True,
    },
    'wave': {
        'n_cells': 2048,
        'center': None,
        'width': None,
        'wavenumber': 0.0,
        'direction': 'outward',
        'amplitude': 1.0,
        't_final': 1.0,
        'probes': [],
        'sample_every': 10,
        'snapshot_every': 0,
        'cfl_factor': 0.5,
        'sponge_fraction': 0.1,
    },
    'dispersion': {
        'n_points': 200,
        'omega_max': None,
        'max_order': 12,
    },
    'spectrum': {
        'n_points': 200,
        'omega_max_factor': 10.0,
    },
}

_TOP_LEVEL = {'schema', 'task', 'medium', 'flow', 'length_scale_m', 'seed', 'out', 'params'}


@dataclass
class Scenario:
    """A parsed and validated scenario."""
    task: str
    medium: MediumModel
    flow: Optional[FlowProfile] = None
    params: Dict[str, Any] = field(default_factory=dict)
    length_scale_m: Optional[float] = None
    seed: int = 0
    out: str = 'out'
    schema: str = SCHEMA

    @property
    def epsilon(self) -> float:
        return static_permittivity(self.medium)

    def describe(self) -> dict:
        """JSON-ready echo of the scenario, as written next to the outputs."""
        medium: Dict[str, Any]
        if self.medium.is_direct:
            medium = {'epsilon': self.medium.direct_permittivity}
        else:
            medium = {'modes': [[m.coupling, m.frequency] for m in self.medium.modes]}
        return {
            'schema': self.schema,
            'task': self.task,
            'medium': medium,
            'flow': self.flow.describe() if self.flow is not None else None,
            'length_scale_m': self.length_scale_m,
            'seed': self.seed,
            'params': self.params,
        }


# =============================================================================
# PARSING
# =============================================================================

def _is_number(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)


def _parse_medium(block, issues: List[Tuple[str, str]]) -> Optional[MediumModel]:
    if not isinstance(block, dict):
        issues.append(('medium', "must be an object with 'epsilon' or 'modes'"))
        return None
    unknown = set(block) - {'epsilon', 'modes'}
    for key in sorted(unknown):
        issues.append((f'medium.{key}', 'unknown field'))
    if ('epsilon' in block) == ('modes' in block):
        issues.append(('medium', "give exactly one of 'epsilon' or 'modes'"))
        return None

    if 'epsilon' in block:
        eps = block['epsilon']
        if not _is_number(eps):
            issues.append(('medium.epsilon', 'must be a finite number'))
            return None
        if eps < 1.0:
            issues.append(('medium.epsilon', f'must be >= 1, got {eps}'))
            return None
        return MediumModel.from_permittivity(float(eps))

    modes = block['modes']
    if not isinstance(modes, list):
        issues.append(('medium.modes', 'must be a list of [chi, Omega] pairs'))
        return None
    pairs = []
    for i, pair in enumerate(modes):
        path = f'medium.modes[{i}]'
        if not (isinstance(pair, list) and len(pair) == 2 and all(_is_number(x) for x in pair)):
            issues.append((path, 'must be a pair of finite numbers [chi, Omega]'))
            continue
        chi, omega = pair
        if chi < 0:
            issues.append((f'{path}[0]', f'coupling must be >= 0, got {chi}'))
        elif omega <= 0:
            issues.append((f'{path}[1]', f'frequency must be > 0, got {omega}'))
        else:
            pairs.append((float(chi), float(omega)))
    if len(pairs) != len(modes):
        return None
    return MediumModel.from_modes(pairs)


def _parse_flow(block, issues: List[Tuple[str, str]]) -> Optional[FlowProfile]:
    if not isinstance(block, dict):
        issues.append(('flow', 'must be an object'))
        return None
    family = block.get('family')
    if family not in FAMILIES:
        issues.append(('flow.family', f"must be one of {', '.join(sorted(FAMILIES))}, got {family!r}"))
        return None
    cls = FAMILIES[family]
    allowed = {f.name for f in fields(cls)}
    kwargs = {}
    ok = True
    for key, value in block.items():
        if key == 'family':
            continue
        if key not in allowed:
            issues.append((f'flow.{key}', f'unknown field for the {family} family'))
            ok = False
        elif key == 'direction':
            try:
                kwargs[key] = FlowDirection(value)
            except ValueError:
                issues.append(('flow.direction', f"must be 'inward' or 'outward', got {value!r}"))
                ok = False
        elif key in ('radii', 'speeds'):
            if not (isinstance(value, list) and all(_is_number(x) for x in value)):
                issues.append((f'flow.{key}', 'must be a list of finite numbers'))
                ok = False
            else:
                kwargs[key] = tuple(float(x) for x in value)
        elif not _is_number(value):
            issues.append((f'flow.{key}', 'must be a finite number'))
            ok = False
        else:
            kwargs[key] = float(value)
    for required in ('direction', 'r_min', 'r_max'):
        if required not in block:
            issues.append((f'flow.{required}', 'required'))
            ok = False
    if not ok:
        return None
    try:
        return cls(**kwargs)
    except OpenHorizonError as exc:
        issues.append(('flow', str(exc)))
        return None


def _parse_params(task: str, block, flow: Optional[FlowProfile],
                  issues: List[Tuple[str, str]]) -> Dict[str, Any]:
    defaults = TASK_DEFAULTS[task]
    if block is None:
        block = {}
    if not isinstance(block, dict):
        issues.append(('params', 'must be an object'))
        return dict(defaults)
    for key in sorted(set(block) - set(defaults)):
        issues.append((f'params.{key}', f'unknown parameter for the {task} task'))
    params = dict(defaults)
    params.update({k: v for k, v in block.items() if k in defaults})
    _check_params(task, params, flow, issues)
    return params


def _require(params, key, issues, check, message):
    value = params[key]
    if not check(value):
        issues.append((f'params.{key}', message))
        return False
    return True


def _check_params(task: str, params: Dict[str, Any], flow: Optional[FlowProfile],
                  issues: List[Tuple[str, str]]):
    def positive_int(x):
        return isinstance(x, int) and not isinstance(x, bool) and x > 0

    def positive(x):
        return _is_number(x) and x > 0

    if task == 'metric':
        _require(params, 'n_points', issues, lambda x: positive_int(x) and x >= 2, 'must be an integer >= 2')
        _require(params, 'n_samples', issues, positive_int, 'must be a positive integer')

    elif task == 'geodesic':
        _require(params, 'n_inside', issues, positive_int, 'must be a positive integer')
        _require(params, 'n_outside', issues, positive_int, 'must be a positive integer')
        _require(params, 'step', issues, positive, 'must be > 0')
        _require(params, 'max_time', issues, positive, 'must be > 0')
        _require(params, 'write_trajectories', issues, lambda x: isinstance(x, bool), 'must be true or false')
        radii = params['radii']
        if radii is not None:
            if not (isinstance(radii, list) and radii and all(_is_number(r) for r in radii)):
                issues.append(('params.radii', 'must be a non-empty list of numbers'))
            elif flow is not None:
                for i, r in enumerate(radii):
                    if not flow.contains(r):
                        issues.append((f'params.radii[{i}]', f'{r} is outside the flow domain {flow.domain}'))

    elif task == 'wave':
        _require(params, 'n_cells', issues, lambda x: positive_int(x) and x >= 16, 'must be an integer >= 16')
        _require(params, 'wavenumber', issues, _is_number, 'must be a finite number')
        _require(params, 'amplitude', issues, _is_number, 'must be a finite number')
        _require(params, 't_final', issues, lambda x: _is_number(x) and x >= 0, 'must be >= 0')
        _require(params, 'sample_every', issues, positive_int, 'must be a positive integer')
        _require(params, 'snapshot_every', issues, lambda x: isinstance(x, int) and x >= 0, 'must be an integer >= 0')
        _require(params, 'cfl_factor', issues, lambda x: positive(x) and x <= 1, 'must be in (0, 1]')
        _require(params, 'direction', issues, lambda x: x in ('outward', 'inward', 'standing'),
                 "must be 'outward', 'inward' or 'standing'")
        sponge_ok = _require(params, 'sponge_fraction', issues,
                             lambda x: _is_number(x) and 0 <= x < 0.5, 'must be in [0, 0.5)')
        probes = params['probes']
        if not (isinstance(probes, list) and all(_is_number(r) for r in probes)):
            issues.append(('params.probes', 'must be a list of numbers'))
            probes = []
        if flow is None:
            return
        for i, r in enumerate(probes):
            if not flow.contains(r):
                issues.append((f'params.probes[{i}]', f'{r} is outside the flow domain {flow.domain}'))
        if params['center'] is None:
            params['center'] = 0.5 * (flow.r_min + flow.r_max)
        if params['width'] is None:
            params['width'] = 0.02 * flow.size
        if not _is_number(params['center']):
            issues.append(('params.center', 'must be a finite number'))
        elif not positive(params['width']):
            issues.append(('params.width', 'must be > 0'))
        elif sponge_ok:
            sponge = params['sponge_fraction'] * flow.size
            reach = 4.0 * params['width']
            lo, hi = flow.r_min + sponge, flow.r_max - sponge
            if params['center'] - reach < lo or params['center'] + reach > hi:
                issues.append(('params.center',
                               f"packet {params['center']} +- {reach:g} overlaps a sponge "
                               f"(physical region [{lo:g}, {hi:g}])"))

    elif task == 'dispersion':
        _require(params, 'n_points', issues, lambda x: positive_int(x) and x >= 2, 'must be an integer >= 2')
        _require(params, 'max_order', issues, lambda x: isinstance(x, int) and x >= 0, 'must be an integer >= 0')
        if params['omega_max'] is not None:
            _require(params, 'omega_max', issues, positive, 'must be > 0')

    elif task == 'spectrum':
        _require(params, 'n_points', issues, lambda x: positive_int(x) and x >= 2, 'must be an integer >= 2')
        _require(params, 'omega_max_factor', issues, positive, 'must be > 0')


def parse_scenario(text: str, task: Optional[str] = None) -> Scenario:
    """
    Parse and validate a scenario document.

    task, when given (the CLI subcommand), fills a missing "task" field and
    must agree with a present one. Raises ScenarioParseError for malformed
    JSON and ScenarioError with every issue found otherwise.
    """
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(exc.msg, exc.lineno, exc.colno) from exc

    if not isinstance(document, dict):
        raise ScenarioError([('', 'scenario must be a JSON object')])

    issues: List[Tuple[str, str]] = []
    for key in sorted(set(document) - _TOP_LEVEL):
        issues.append((key, 'unknown field'))

    schema = document.get('schema')
    if schema != SCHEMA:
        issues.append(('schema', f'must be {SCHEMA!r}, got {schema!r}'))

    name = document.get('task', task)
    if task is not None and name != task:
        issues.append(('task', f'scenario is for {name!r}, not {task!r}'))
    if name not in TASKS:
        issues.append(('task', f"must be one of {', '.join(TASKS)}, got {name!r}"))
        name = None

    medium = _parse_medium(document.get('medium'), issues)

    flow = None
    if 'flow' in document:
        flow = _parse_flow(document['flow'], issues)
    elif name is not None and name not in FLOWLESS_TASKS:
        issues.append(('flow', f'required for the {name} task'))

    length_scale = document.get('length_scale_m')
    if length_scale is not None and not (_is_number(length_scale) and length_scale > 0):
        issues.append(('length_scale_m', 'must be a number > 0'))
        length_scale = None
    if name == 'spectrum' and document.get('length_scale_m') is None:
        issues.append(('length_scale_m', 'required for the spectrum task'))

    seed = document.get('seed', 0)
    if not (isinstance(seed, int) and not isinstance(seed, bool) and 0 <= seed < 2 ** 64):
        issues.append(('seed', 'must be an integer in [0, 2^64)'))
        seed = 0

    out = document.get('out', 'out')
    if not isinstance(out, str) or not out:
        issues.append(('out', 'must be a non-empty string'))
        out = 'out'

    params: Dict[str, Any] = {}
    if name is not None:
        params = _parse_params(name, document.get('params'), flow, issues)
    if name == 'dispersion' and medium is not None and params.get('omega_max') is not None:
        if params['omega_max'] >= medium.min_frequency:
            issues.append(('params.omega_max',
                           f"must stay below the lowest resonance {medium.min_frequency:g}"))

    if issues:
        raise ScenarioError(issues)
    return Scenario(
        task=name,
        medium=medium,
        flow=flow,
        params=params,
        length_scale_m=None if length_scale is None else float(length_scale),
        seed=seed,
        out=out,
    )


def load_scenario(path, task: Optional[str] = None) -> Scenario:
    """Read and parse a scenario file (OSError propagates)."""
    with open(path, encoding='utf-8') as handle:
        return parse_scenario(handle.read(), task)
