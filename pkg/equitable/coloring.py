from collections import Counter
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from math import ceil
from random import Random
from typing import Optional, Union
import logging

from equitable.configurations import Configuration, ReducibleSet, find_reducible_set, verify_reducible
from equitable.errors import BadParams, InputError, NotUniform, PreconditionViolated, SizeLimit
from equitable.plane_graph import Adjacency, PlaneGraph, as_adjacency
from equitable.settings import DEFAULT_SETTINGS, EngineSettings
from equitable.structure import class_membership

logger = logging.getLogger(__name__)


@dataclass
class EquitableColoring:
    k: int
    assignment: dict[int, int]

    @property
    def class_sizes(self) -> list[int]:
        counts = Counter(self.assignment.values())
        return [counts.get(c, 0) for c in range(1, self.k + 1)]

    def to_payload(self) -> dict:
        return {
            'k': self.k,
            'coloring': {str(v): c for v, c in sorted(self.assignment.items())},
            'class_sizes': self.class_sizes,
        }


@dataclass
class ListAssignment:
    k: int
    lists: dict[int, tuple[int, ...]]

    @classmethod
    def from_mapping(cls, raw: Mapping, vertices: Optional[Sequence[int]] = None) -> 'ListAssignment':
        try:
            lists = {int(v): tuple(int(c) for c in colors) for v, colors in raw.items()}
        except (TypeError, ValueError, AttributeError) as e:
            raise InputError(f'列表分配格式错误: {e}') from e
        if vertices is not None:
            missing = sorted(set(vertices) - lists.keys())
            if missing:
                raise NotUniform(f'顶点 {missing} 没有颜色列表', {'missing': missing})
        sizes = {v: len(set(colors)) for v, colors in lists.items()}
        if len(set(sizes.values())) > 1 or any(len(c) != sizes[v] for v, c in lists.items()):
            raise NotUniform('颜色列表长度不一致或含重复颜色', {'sizes': sorted(set(sizes.values()))})
        k = next(iter(sizes.values()), 0)
        return cls(k, {v: tuple(sorted(colors)) for v, colors in lists.items()})

    def restricted(self, vertices) -> 'ListAssignment':
        return ListAssignment(self.k, {v: self.lists[v] for v in vertices})

    def to_payload(self) -> dict:
        return {str(v): list(colors) for v, colors in sorted(self.lists.items())}


@dataclass
class EquitableListColoring:
    k: int
    assignment: dict[int, int]

    @property
    def usage(self) -> dict[int, int]:
        return dict(sorted(Counter(self.assignment.values()).items()))

    @property
    def cap(self) -> int:
        return ceil(len(self.assignment) / self.k) if self.k else 0

    def to_payload(self) -> dict:
        return {
            'k': self.k,
            'coloring': {str(v): c for v, c in sorted(self.assignment.items())},
            'usage': {str(c): n for c, n in self.usage.items()},
            'cap': self.cap,
        }


@dataclass(frozen=True)
class Anomaly:
    kind: str
    n: int
    k: int
    message: str

    def to_payload(self) -> dict:
        return {'kind': self.kind, 'n': self.n, 'k': self.k, 'message': self.message}


@dataclass
class ConstructiveResult:
    coloring: Union[EquitableColoring, EquitableListColoring]
    reducible_sets: list[ReducibleSet] = field(default_factory=list)
    anomalies: list[Anomaly] = field(default_factory=list)
    base_size: int = 0

    def to_payload(self) -> dict:
        return {
            **self.coloring.to_payload(),
            'reducible_sets': [s.to_payload() for s in self.reducible_sets],
            'base_size': self.base_size,
            'anomalies': [a.to_payload() for a in self.anomalies],
        }


def _check_size(adjacency: Adjacency, settings: EngineSettings) -> None:
    if len(adjacency) > settings.exact_vertex_limit:
        raise SizeLimit(
            f'精确搜索最多支持 {settings.exact_vertex_limit} 个顶点，当前 {len(adjacency)} 个',
            {'n': len(adjacency), 'limit': settings.exact_vertex_limit},
        )


def exact_equitable(g, k: int, settings: EngineSettings = DEFAULT_SETTINGS) -> Optional[EquitableColoring]:
    """完全回溯：DSATUR 选点，类大小上限 ⌈n/k⌉，并保证剩余点足以填满每个类的下限"""
    if k < 1:
        raise BadParams(f'k 必须为正整数，收到 {k}')
    adjacency = as_adjacency(g)
    _check_size(adjacency, settings)
    n = len(adjacency)
    q, r = divmod(n, k)
    big_cap = r if r else 0
    top = q + 1 if r else q

    color: dict[int, int] = {}
    counts = [0] * (k + 1)
    big = [0]

    def pick() -> int:
        best, best_key = None, None
        for v in adjacency:
            if v in color:
                continue
            sat = len({color[u] for u in adjacency[v] if u in color})
            key = (-sat, -len(adjacency[v]), v)
            if best_key is None or key < best_key:
                best, best_key = v, key
        return best

    def search(left: int) -> bool:
        if left == 0:
            return True
        deficit = sum(max(0, q - counts[c]) for c in range(1, k + 1))
        if deficit > left:
            return False
        v = pick()
        taken = {color[u] for u in adjacency[v] if u in color}
        limit = min(k, max(color.values(), default=0) + 1)
        for c in range(1, limit + 1):
            if c in taken or counts[c] >= top:
                continue
            grows_big = r and counts[c] == q
            if grows_big and big[0] >= big_cap:
                continue
            color[v] = c
            counts[c] += 1
            big[0] += 1 if grows_big else 0
            if search(left - 1):
                return True
            big[0] -= 1 if grows_big else 0
            counts[c] -= 1
            del color[v]
        return False

    if not search(n):
        logger.debug(f'[Coloring] n={n} 不存在均匀 {k}-着色')
        return None
    return EquitableColoring(k, dict(sorted(color.items())))


def chi_e(g, settings: EngineSettings = DEFAULT_SETTINGS) -> int:
    adjacency = as_adjacency(g)
    _check_size(adjacency, settings)
    for k in range(1, len(adjacency) + 1):
        if exact_equitable(adjacency, k, settings) is not None:
            return k
    return 0


def chi_star_e(g, settings: EngineSettings = DEFAULT_SETTINGS) -> int:
    """自 Δ+1 向下扫描，直到第一个不可均匀着色的 l；Δ+1 本身也实际求解"""
    adjacency = as_adjacency(g)
    _check_size(adjacency, settings)
    if not adjacency:
        return 0
    delta = max(len(nbrs) for nbrs in adjacency.values())
    if exact_equitable(adjacency, delta + 1, settings) is None:
        raise PreconditionViolated(f'图不存在均匀 {delta + 1}-着色，与 Δ+1 可均匀着色矛盾')
    l = delta + 1
    while l > 1 and exact_equitable(adjacency, l - 1, settings) is not None:
        l -= 1
    return l


def _check_base_covers(adjacency: Adjacency, reducible: ReducibleSet, assignment: Mapping[int, int]) -> None:
    rest = set(adjacency) - set(reducible.vertices)
    missing = sorted(rest - set(assignment))
    extra = sorted(set(assignment) - rest)
    if missing or extra:
        raise InputError(
            f'基础着色应恰好覆盖 V(G)-S: 缺少 {missing}，多出 {extra}',
            {'missing': missing, 'extra': extra},
        )


def extend_coloring(g, reducible: ReducibleSet, base: EquitableColoring) -> EquitableColoring:
    """按 x_1..x_k 的顺序逐个着色：避开 N(x_i)-S 上的颜色与 S 中已用颜色"""
    adjacency = as_adjacency(g)
    k = reducible.k
    if base.k != k:
        raise PreconditionViolated(f'基础着色的颜色数 {base.k} 与 k={k} 不一致')
    check = verify_reducible(adjacency, reducible.vertices, k)
    if not check.accepted:
        i, count = check.violation
        raise PreconditionViolated(
            f'S 不满足可约条件: x_{i} 有 {count} 个外部邻点，上限 {k - i}',
            {'index': i, 'count': count},
        )
    _check_base_covers(adjacency, reducible, base.assignment)

    in_s = set(reducible.vertices)
    assignment = dict(base.assignment)
    used: set[int] = set()
    for v in reducible.vertices:
        forbidden = used | {assignment[u] for u in adjacency[v] - in_s}
        c = next(c for c in range(1, k + 1) if c not in forbidden)
        assignment[v] = c
        used.add(c)
    return EquitableColoring(k, dict(sorted(assignment.items())))


def _without(g, removed) -> Union[PlaneGraph, Adjacency]:
    if isinstance(g, PlaneGraph):
        return g.subgraph_without(removed)
    gone = set(removed)
    adjacency = as_adjacency(g)
    return {v: nbrs - gone for v, nbrs in adjacency.items() if v not in gone}


def _check_preconditions(g, k: int, force: bool) -> None:
    adjacency = as_adjacency(g)
    delta = max((len(nbrs) for nbrs in adjacency.values()), default=0)
    if force:
        return
    if k < max(7, delta):
        raise PreconditionViolated(f'构造性着色要求 k >= max(7, Δ) = {max(7, delta)}，收到 {k}', {'k': k, 'delta': delta})
    if not isinstance(g, PlaneGraph):
        raise PreconditionViolated('构造性着色要求平面图输入（或使用 force）')
    report = class_membership(g)
    if not report.is_member:
        raise PreconditionViolated('图含弦 4-圈或弦 6-圈，不在适用类中（可用 force 跳过）')


def _peel(g, k: int, settings: EngineSettings, catalog, anomalies: list[Anomaly]):
    """反复删去可约集，直到剩余部分交给精确求解"""
    current = g
    sets: list[ReducibleSet] = []
    threshold = max(k, settings.base_case_threshold)
    while len(as_adjacency(current)) > threshold:
        found = find_reducible_set(current, k, catalog, settings)
        if found is None:
            n = len(as_adjacency(current))
            anomalies.append(Anomaly('no_reducible_set', n, k, f'{n} 个顶点的子图上未找到可约集，改用精确求解'))
            logger.warning(f'[Coloring] 未找到可约集 (n={n}, k={k})，改用精确求解')
            break
        sets.append(found)
        current = _without(current, found.vertices)
    return current, sets


def color_constructive(
    g,
    k: int,
    force: bool = False,
    settings: EngineSettings = DEFAULT_SETTINGS,
    catalog: Optional[Sequence[Configuration]] = None,
) -> ConstructiveResult:
    _check_preconditions(g, k, force)
    anomalies: list[Anomaly] = []
    base_graph, sets = _peel(g, k, settings, catalog, anomalies)

    coloring = exact_equitable(base_graph, k, settings)
    if coloring is None:
        raise PreconditionViolated(f'剩余子图不存在均匀 {k}-着色')
    base_size = len(coloring.assignment)

    current = base_graph
    for reducible in reversed(sets):
        current = _restore(g, current, reducible)
        coloring = extend_coloring(current, reducible, coloring)
    logger.info(f'[Coloring] 构造性均匀 {k}-着色完成: 删去 {len(sets)} 个可约集, 基础部分 {base_size} 个顶点')
    return ConstructiveResult(coloring, sets, anomalies, base_size)


def _restore(g, current, reducible: ReducibleSet) -> Adjacency:
    """把可约集放回：取原图在 current ∪ S 上的导出子图"""
    full = as_adjacency(g)
    keep = set(as_adjacency(current)) | set(reducible.vertices)
    return {v: full[v] & keep for v in keep}


def exact_list(
    g,
    lists: ListAssignment,
    cap: Optional[int] = None,
    settings: EngineSettings = DEFAULT_SETTINGS,
) -> Optional[EquitableListColoring]:
    """列表着色回溯：每次取可选颜色最少的点，颜色按列表中从小到大尝试"""
    adjacency = as_adjacency(g)
    _check_size(adjacency, settings)
    n = len(adjacency)
    if lists.k < 1:
        raise NotUniform('颜色列表为空')
    cap = ceil(n / lists.k) if cap is None else cap
    color: dict[int, int] = {}
    usage: Counter = Counter()

    def options(v: int) -> list[int]:
        taken = {color[u] for u in adjacency[v] if u in color}
        return [c for c in lists.lists[v] if c not in taken and usage[c] < cap]

    def search() -> bool:
        free = [v for v in adjacency if v not in color]
        if not free:
            return True
        v = min(free, key=lambda u: (len(options(u)), u))
        for c in options(v):
            color[v] = c
            usage[c] += 1
            if search():
                return True
            usage[c] -= 1
            del color[v]
        return False

    if not search():
        return None
    return EquitableListColoring(lists.k, dict(sorted(color.items())))


def extend_list_coloring(g, reducible: ReducibleSet, lists: ListAssignment, base: EquitableListColoring) -> EquitableListColoring:
    adjacency = as_adjacency(g)
    k = reducible.k
    check = verify_reducible(adjacency, reducible.vertices, k)
    if not check.accepted:
        i, count = check.violation
        raise PreconditionViolated(f'S 不满足可约条件: x_{i} 有 {count} 个外部邻点', {'index': i, 'count': count})
    _check_base_covers(adjacency, reducible, base.assignment)

    in_s = set(reducible.vertices)
    assignment = dict(base.assignment)
    used: set[int] = set()
    for v in reducible.vertices:
        forbidden = used | {assignment[u] for u in adjacency[v] - in_s}
        c = next((c for c in lists.lists[v] if c not in forbidden), None)
        if c is None:
            raise PreconditionViolated(f'顶点 {v} 的颜色列表全部被占用')
        assignment[v] = c
        used.add(c)
    return EquitableListColoring(k, dict(sorted(assignment.items())))


def list_color_constructive(
    g,
    lists: ListAssignment,
    force: bool = False,
    settings: EngineSettings = DEFAULT_SETTINGS,
    catalog: Optional[Sequence[Configuration]] = None,
) -> ConstructiveResult:
    adjacency = as_adjacency(g)
    lists = ListAssignment.from_mapping(lists.lists, vertices=list(adjacency))
    k = lists.k
    _check_preconditions(g, k, force)
    anomalies: list[Anomaly] = []
    base_graph, sets = _peel(g, k, settings, catalog, anomalies)

    base_vertices = list(as_adjacency(base_graph))
    coloring = exact_list(base_graph, lists.restricted(base_vertices), ceil(len(base_vertices) / k), settings)
    if coloring is None:
        raise PreconditionViolated('剩余子图不存在均匀列表着色')
    base_size = len(coloring.assignment)

    current = base_graph
    for reducible in reversed(sets):
        current = _restore(g, current, reducible)
        coloring = extend_list_coloring(current, reducible, lists, coloring)
    logger.info(f'[Coloring] 构造性均匀列表着色完成: k={k}, 删去 {len(sets)} 个可约集')
    return ConstructiveResult(coloring, sets, anomalies, base_size)


def random_lists(g, k: int, palette: int, rng: Random) -> ListAssignment:
    if palette < k:
        raise BadParams(f'调色板大小 {palette} 小于 k={k}')
    adjacency = as_adjacency(g)
    return ListAssignment(k, {v: tuple(sorted(rng.sample(range(1, palette + 1), k))) for v in sorted(adjacency)})


@dataclass
class ValidationResult:
    passed: bool
    violation: Optional[dict] = None

    def to_payload(self) -> dict:
        return {'passed': self.passed, 'violation': self.violation}


def validate_coloring(g, assignment: Mapping, k: Optional[int] = None, lists: Optional[ListAssignment] = None) -> ValidationResult:
    """独立于求解器的检查：正常性、均匀性（或列表上限）、列表归属"""
    adjacency = as_adjacency(g)
    colors = {int(v): int(c) for v, c in assignment.items()}
    for v in sorted(adjacency):
        if v not in colors:
            return ValidationResult(False, {'kind': 'uncolored', 'vertex': v})
    for u in sorted(adjacency):
        for v in sorted(adjacency[u]):
            if u < v and colors[u] == colors[v]:
                return ValidationResult(False, {'kind': 'proper', 'edge': [u, v], 'color': colors[u]})

    n = len(adjacency)
    if lists is not None:
        for v in sorted(adjacency):
            if colors[v] not in lists.lists.get(v, ()):
                return ValidationResult(False, {'kind': 'list', 'vertex': v, 'color': colors[v]})
        cap = ceil(n / lists.k) if lists.k else 0
        for c, count in sorted(Counter(colors[v] for v in adjacency).items()):
            if count > cap:
                return ValidationResult(False, {'kind': 'cap', 'color': c, 'count': count, 'cap': cap})
        return ValidationResult(True)

    k = k if k is not None else len(set(colors.values()))
    for v in sorted(adjacency):
        if not 1 <= colors[v] <= k:
            return ValidationResult(False, {'kind': 'range', 'vertex': v, 'color': colors[v], 'k': k})
    counts = Counter(colors[v] for v in adjacency)
    sizes = [counts.get(c, 0) for c in range(1, k + 1)]
    if sizes and max(sizes) - min(sizes) > 1:
        return ValidationResult(False, {'kind': 'balance', 'class_sizes': sizes})
    return ValidationResult(True)


@dataclass
class CorollaryReport:
    applicable: bool
    reason: str = ''
    delta: int = 0
    chi_e: Optional[int] = None
    chi_star_e: Optional[int] = None

    @property
    def holds(self) -> Optional[bool]:
        if not self.applicable:
            return None
        return self.chi_e <= self.delta and self.chi_star_e <= self.delta

    def to_payload(self) -> dict:
        return {
            'applicable': self.applicable,
            'reason': self.reason,
            'delta': self.delta,
            'chi_e': self.chi_e,
            'chi_star_e': self.chi_star_e,
            'holds': self.holds,
        }


def corollary_check(g: PlaneGraph, settings: EngineSettings = DEFAULT_SETTINGS) -> CorollaryReport:
    """Δ >= 7 的类成员：检查 χ_e <= Δ 与 χ*_e <= Δ"""
    delta = g.max_degree
    if delta < 7:
        return CorollaryReport(False, 'Δ < 7', delta)
    if g.order > settings.exact_vertex_limit:
        return CorollaryReport(False, '顶点数超出精确搜索上限', delta)
    if not class_membership(g).is_member:
        return CorollaryReport(False, '不是类成员', delta)
    return CorollaryReport(True, '', delta, chi_e(g, settings), chi_star_e(g, settings))
