from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from importlib import resources
from itertools import permutations
from pathlib import Path
from typing import Literal, Optional, Union
import json
import logging
import re

from networkx.algorithms.isomorphism import GraphMatcher
from pydantic import BaseModel, ValidationError
import networkx as nx

from equitable.errors import DegreeBelowShownEdges, DuplicateVertex, GraphTooSmall, InputError, MalformedPattern, WrongSize
from equitable.plane_graph import Adjacency, PlaneGraph, as_adjacency
from equitable.settings import DEFAULT_SETTINGS, EngineSettings
from equitable.structure import canonical_cycle

logger = logging.getLogger(__name__)

SHOWN_TO_DELTA = 'shown-to-Delta'

_LABEL_TOP = re.compile(r'^x_\{?k(?:-(\d+))?\}?$')
_LABEL_LOW = re.compile(r'^x_\{?(\d+)\}?$')


class PatternVertexModel(BaseModel):
    id: Union[int, str]
    label: Optional[str] = None
    kind: Literal['solid', 'hollow'] = 'hollow'
    degree: Union[int, list[int], Literal['shown-to-Delta']] = SHOWN_TO_DELTA


class FaceConstraintModel(BaseModel):
    cycle: list[Union[int, str]]
    anchored: list[Union[int, str]] = []


class ConfigurationModel(BaseModel):
    name: str = ''
    notes: str = ''
    vertices: list[PatternVertexModel]
    edges: list[tuple[Union[int, str], Union[int, str]]] = []
    faces: list[FaceConstraintModel] = []
    distinct: list[list[Union[int, str]]] = []


@dataclass(frozen=True)
class PatternVertex:
    id: str
    label: Optional[str]
    solid: bool
    lo: int
    hi: Optional[int]  # None 表示直到 Δ(G)
    shown: int

    def spec_key(self) -> tuple:
        return self.solid, self.lo, self.hi


@dataclass(frozen=True)
class FaceConstraint:
    cycle: tuple[str, ...]
    anchored: frozenset[str] = frozenset()


@dataclass
class Configuration:
    name: str
    vertices: dict[str, PatternVertex]
    edges: tuple[tuple[str, str], ...]
    faces: tuple[FaceConstraint, ...] = ()
    distinct: tuple[frozenset[str], ...] = ()
    notes: str = ''

    @property
    def labels(self) -> dict[str, str]:
        return {p.label: p.id for p in self.vertices.values() if p.label}

    def neighbors(self, pid: str) -> set[str]:
        return {b if a == pid else a for a, b in self.edges if pid in (a, b)}

    def to_payload(self) -> dict:
        return {
            'name': self.name,
            'vertices': [
                {
                    'id': p.id,
                    'label': p.label,
                    'kind': 'solid' if p.solid else 'hollow',
                    'degree': [p.lo, p.hi] if p.hi is not None else SHOWN_TO_DELTA,
                }
                for p in self.vertices.values()
            ],
            'edges': [list(e) for e in self.edges],
            'faces': [{'cycle': list(f.cycle), 'anchored': sorted(f.anchored)} for f in self.faces],
            'distinct': [sorted(group) for group in self.distinct],
        }


def label_index(label: str, k: int) -> Optional[int]:
    """x_k -> k，x_{k-3} -> k-3，x_2 -> 2"""
    m = _LABEL_TOP.match(label)
    if m:
        return k - int(m.group(1) or 0)
    m = _LABEL_LOW.match(label)
    if m:
        return int(m.group(1))
    return None


def parse_configuration(text: Union[str, Mapping]) -> Configuration:
    try:
        raw = json.loads(text) if isinstance(text, str) else dict(text)
        model = ConfigurationModel.model_validate(raw)
    except (json.JSONDecodeError, ValidationError, TypeError) as e:
        raise MalformedPattern(f'构型描述格式错误: {e}') from e

    if not model.vertices:
        raise MalformedPattern('构型至少需要一个顶点')
    ids = [str(v.id) for v in model.vertices]
    if len(set(ids)) != len(ids):
        raise MalformedPattern(f'构型顶点编号重复: {ids}')
    known = set(ids)

    edges: set[tuple[str, str]] = set()
    for a, b in model.edges:
        a, b = str(a), str(b)
        if a not in known or b not in known:
            raise MalformedPattern(f'边 ({a}, {b}) 引用了未知顶点')
        if a == b:
            raise MalformedPattern(f'构型中不允许自环: {a}')
        edges.add((a, b) if a < b else (b, a))
    shown = {pid: 0 for pid in ids}
    for a, b in edges:
        shown[a] += 1
        shown[b] += 1

    vertices: dict[str, PatternVertex] = {}
    for v in model.vertices:
        pid = str(v.id)
        solid = v.kind == 'solid'
        if v.degree == SHOWN_TO_DELTA:
            lo, hi = shown[pid], (shown[pid] if solid else None)
        elif isinstance(v.degree, int):
            lo = hi = v.degree
        else:
            if len(v.degree) != 2 or v.degree[0] > v.degree[1]:
                raise MalformedPattern(f'顶点 {pid} 的度数范围无效: {v.degree}')
            lo, hi = v.degree
        if lo < shown[pid]:
            raise DegreeBelowShownEdges(
                f'顶点 {pid} 画出了 {shown[pid]} 条边，但度数下界为 {lo}',
                {'vertex': pid, 'shown': shown[pid], 'lo': lo},
            )
        if solid and (lo != shown[pid] or hi != shown[pid]):
            raise MalformedPattern(f'实心顶点 {pid} 的度数必须等于画出的边数 {shown[pid]}')
        vertices[pid] = PatternVertex(pid, v.label, solid, lo, hi, shown[pid])

    faces = []
    for f in model.faces:
        cycle = tuple(str(x) for x in f.cycle)
        anchored = frozenset(str(x) for x in f.anchored)
        if len(cycle) < 3 or not set(cycle) <= known or not anchored <= set(cycle):
            raise MalformedPattern(f'面约束无效: {list(cycle)}')
        faces.append(FaceConstraint(cycle, anchored))

    distinct = [frozenset(str(x) for x in group) for group in model.distinct]
    top = [p.id for p in vertices.values() if p.label and label_index(p.label, 100) in (100, 99, 98)]
    if len(top) > 1:
        # x_k, x_{k-1}, x_{k-2} 总是互不相同
        distinct.append(frozenset(top))
    for group in distinct:
        if not group <= known:
            raise MalformedPattern(f'distinct 组引用了未知顶点: {sorted(group)}')

    cfg = Configuration(
        name=model.name,
        vertices=vertices,
        edges=tuple(sorted(edges)),
        faces=tuple(faces),
        distinct=tuple(distinct),
        notes=model.notes,
    )
    logger.debug(f'[Config] 解析构型 {cfg.name or "<anonymous>"}: {len(vertices)} 点, {len(edges)} 边')
    return cfg


@dataclass(frozen=True, order=True)
class Match:
    assignment: tuple[tuple[str, int], ...]

    @property
    def mapping(self) -> dict[str, int]:
        return dict(self.assignment)

    def labeled(self, cfg: Configuration) -> dict[str, int]:
        mapping = self.mapping
        return {label: mapping[pid] for label, pid in cfg.labels.items()}

    def to_payload(self, cfg: Optional[Configuration] = None) -> dict:
        payload = {'mapping': {pid: v for pid, v in self.assignment}}
        if cfg is not None:
            payload['labels'] = self.labeled(cfg)
        return payload


def _mergeable_partitions(cfg: Configuration) -> Iterator[list[list[str]]]:
    """枚举允许重合的顶点分组；distinct 组中的顶点从不与他点重合"""
    pinned = set().union(*cfg.distinct) if cfg.distinct else set()
    free = [pid for pid in cfg.vertices if pid not in pinned]
    fixed = [[pid] for pid in cfg.vertices if pid in pinned]
    adjacency = {pid: cfg.neighbors(pid) for pid in cfg.vertices}

    def compatible(block: list[str], pid: str) -> bool:
        spec = cfg.vertices[pid].spec_key()
        for other in block:
            if cfg.vertices[other].spec_key() != spec or other in adjacency[pid]:
                return False
        return True

    def extend(i: int, blocks: list[list[str]]) -> Iterator[list[list[str]]]:
        if i == len(free):
            yield fixed + [list(b) for b in blocks]
            return
        pid = free[i]
        for block in blocks:
            if compatible(block, pid):
                block.append(pid)
                yield from extend(i + 1, blocks)
                block.pop()
        blocks.append([pid])
        yield from extend(i + 1, blocks)
        blocks.pop()

    yield from extend(0, [])


def _quotient(cfg: Configuration, blocks: list[list[str]]) -> Optional[tuple[nx.Graph, dict[str, int]]]:
    owner = {pid: i for i, block in enumerate(blocks) for pid in block}
    q = nx.Graph()
    q.add_nodes_from(range(len(blocks)))
    for a, b in cfg.edges:
        x, y = owner[a], owner[b]
        if x == y or q.has_edge(x, y):
            # 重合后出现自环或重边
            return None
        q.add_edge(x, y)
    for i, block in enumerate(blocks):
        p = cfg.vertices[block[0]]
        shown = q.degree(i)
        if p.solid:
            lo, hi = shown, shown
        else:
            lo, hi = max(p.lo, shown), p.hi
        if hi is not None and lo > hi:
            return None
        q.nodes[i].update(lo=lo, hi=hi)
    return q, owner


def _host_face_cycles(g: PlaneGraph) -> set[tuple[int, ...]]:
    cycles = set()
    for f in g.faces:
        walk = f.walk_vertices
        if f.degree >= 3 and len(set(walk)) == len(walk):
            cycles.add(canonical_cycle(walk))
    return cycles


def _face_orderings(constraint: FaceConstraint) -> Iterator[tuple[str, ...]]:
    cycle = constraint.cycle
    yield cycle
    if len(cycle) != 4:
        return
    slots = [i for i, pid in enumerate(cycle) if pid not in constraint.anchored]
    loose = [cycle[i] for i in slots]
    for perm in permutations(loose):
        order = list(cycle)
        for i, pid in zip(slots, perm):
            order[i] = pid
        yield tuple(order)


def _faces_ok(cfg: Configuration, mapping: dict[str, int], host_faces: set[tuple[int, ...]]) -> bool:
    for constraint in cfg.faces:
        found = False
        for order in _face_orderings(constraint):
            image = [mapping[pid] for pid in order]
            if len(set(image)) == len(image) and canonical_cycle(image) in host_faces:
                found = True
                break
        if not found:
            return False
    return True


def _automorphisms(cfg: Configuration) -> list[dict[str, str]]:
    p = nx.Graph()
    for pid, v in cfg.vertices.items():
        p.add_node(pid, key=(v.label, v.spec_key()))
    p.add_edges_from(cfg.edges)
    face_keys = {canonical_cycle(f.cycle) for f in cfg.faces}
    autos = []
    for sigma in GraphMatcher(p, p, node_match=lambda a, b: a['key'] == b['key']).isomorphisms_iter():
        if all(canonical_cycle([sigma[x] for x in f.cycle]) in face_keys for f in cfg.faces):
            autos.append(sigma)
    return autos


def match_configuration(g: PlaneGraph, cfg: Configuration) -> list[Match]:
    host = g.to_networkx()
    for v in host.nodes:
        host.nodes[v]['degree'] = g.degree(v)
    host_faces = _host_face_cycles(g)
    autos = _automorphisms(cfg)
    order = sorted(cfg.vertices)

    def node_match(host_attrs: dict, pattern_attrs: dict) -> bool:
        d = host_attrs['degree']
        return d >= pattern_attrs['lo'] and (pattern_attrs['hi'] is None or d <= pattern_attrs['hi'])

    found: set[Match] = set()
    for blocks in _mergeable_partitions(cfg):
        built = _quotient(cfg, blocks)
        if built is None:
            continue
        quotient, owner = built
        solid_blocks = {owner[p.id] for p in cfg.vertices.values() if p.solid}
        for host_to_block in GraphMatcher(host, quotient, node_match=node_match).subgraph_monomorphisms_iter():
            block_to_host = {b: v for v, b in host_to_block.items()}
            # 实心顶点的邻域恰为画出的邻点
            if any(
                set(g.neighbors(block_to_host[b])) != {block_to_host[c] for c in quotient.neighbors(b)}
                for b in solid_blocks
            ):
                continue
            mapping = {pid: block_to_host[owner[pid]] for pid in cfg.vertices}
            if not _faces_ok(cfg, mapping, host_faces):
                continue
            key = min(tuple((pid, mapping[sigma[pid]]) for pid in order) for sigma in autos)
            found.add(Match(key))

    matches = sorted(found)
    logger.info(f'[Config] 构型 {cfg.name or "<anonymous>"} 在 {g!r} 中匹配 {len(matches)} 次')
    return matches


@dataclass(frozen=True)
class ReducibleSet:
    k: int
    vertices: tuple[int, ...]  # x_1..x_k
    counts: tuple[int, ...]
    violation: Optional[tuple[int, int]] = None
    source: str = ''

    @property
    def accepted(self) -> bool:
        return self.violation is None

    def to_payload(self) -> dict:
        payload = {
            'k': self.k,
            'accepted': self.accepted,
            'order': list(self.vertices),
            'certificate': [
                {'index': i + 1, 'vertex': v, 'outside_neighbors': c, 'bound': self.k - i - 1}
                for i, (v, c) in enumerate(zip(self.vertices, self.counts))
            ],
        }
        if self.violation is not None:
            payload['violation'] = {'index': self.violation[0], 'count': self.violation[1]}
        if self.source:
            payload['source'] = self.source
        return payload


def verify_reducible(g, ordered: Sequence[int], k: int) -> ReducibleSet:
    """检查 |N(x_i) - S| <= k - i；返回带首个违例位置的证书"""
    adjacency = as_adjacency(g)
    ordered = [int(v) for v in ordered]
    if len(ordered) != k:
        raise WrongSize(f'S 的大小为 {len(ordered)}，应为 k={k}', {'size': len(ordered), 'k': k})
    if len(set(ordered)) != len(ordered):
        raise DuplicateVertex(f'S 中有重复顶点: {ordered}')
    unknown = [v for v in ordered if v not in adjacency]
    if unknown:
        raise InputError(f'S 中的顶点不在图中: {unknown}')

    chosen = set(ordered)
    counts = tuple(len(adjacency[v] - chosen) for v in ordered)
    violation = next(
        ((i, c) for i, c in enumerate(counts, start=1) if c > k - i),
        None,
    )
    return ReducibleSet(k=k, vertices=tuple(ordered), counts=counts, violation=violation)


def complete_seed(g, seed: Union[Sequence[int], Mapping[int, int]], k: int) -> list[int]:
    """自高到低补全 S：每个空位取删去已选点后度数最小的点，同度取编号最小者。

    seed 为序列时依次占据 x_k, x_{k-1}, ...；为映射时给出 {位置: 顶点}。
    """
    adjacency = as_adjacency(g)
    n = len(adjacency)
    if n < k:
        raise GraphTooSmall(f'图只有 {n} 个顶点，无法取出大小为 {k} 的集合', {'n': n, 'k': k})
    if isinstance(seed, Mapping):
        fixed = {int(i): int(v) for i, v in seed.items()}
    else:
        fixed = {k - j: int(v) for j, v in enumerate(seed)}
    if len(fixed) > k or any(not 1 <= i <= k for i in fixed):
        raise GraphTooSmall(f'种子位置超出 1..{k}: {sorted(fixed)}', {'k': k})
    if len(set(fixed.values())) != len(fixed):
        raise DuplicateVertex(f'种子中有重复顶点: {sorted(fixed.values())}')

    chosen = set(fixed.values())
    remaining = {v: len(nbrs - chosen) for v, nbrs in adjacency.items() if v not in chosen}
    order = dict(fixed)
    for position in range(k, 0, -1):
        if position in order:
            continue
        v = min(remaining, key=lambda u: (remaining[u], u))
        order[position] = v
        del remaining[v]
        for u in adjacency[v]:
            if u in remaining:
                remaining[u] -= 1
    return [order[i] for i in range(1, k + 1)]


def _seed_candidates(adjacency: Adjacency, settings: EngineSettings) -> list[int]:
    pool = sorted(adjacency, key=lambda v: (len(adjacency[v]), v))[: settings.seed_pool_size]
    return [v for v in pool if len(adjacency[v]) <= 5]


def _seed_search(adjacency: Adjacency, k: int, settings: EngineSettings) -> Optional[ReducibleSet]:
    candidates = _seed_candidates(adjacency, settings)
    max_size = min(settings.max_seed_size, k)
    budget = [settings.search_budget]

    def attempt(seed: list[int]) -> Optional[ReducibleSet]:
        budget[0] -= 1
        result = verify_reducible(adjacency, complete_seed(adjacency, seed, k), k)
        return result if result.accepted else None

    def dfs(seed: list[int]) -> Optional[ReducibleSet]:
        if budget[0] <= 0:
            return None
        found = attempt(seed)
        if found is not None or len(seed) == max_size:
            return found
        taken = set(seed)
        frontier = sorted({u for v in seed for u in adjacency[v]} - taken)
        ordered = [v for v in frontier if v in candidates] + [v for v in candidates if v not in frontier]
        # x 落在位置 i = k - len(seed)，允许 len(seed) 个外部邻点
        slots_left = k - len(seed) - 1
        for x in ordered:
            if x in taken:
                continue
            # 余下空位最多能再吸收 slots_left 个邻点
            if len(adjacency[x] - taken) - slots_left > len(seed):
                continue
            found = dfs(seed + [x])
            if found is not None or budget[0] <= 0:
                return found
        return None

    return dfs([])


def find_reducible_set(
    g,
    k: int,
    catalog: Optional[Sequence[Configuration]] = None,
    settings: EngineSettings = DEFAULT_SETTINGS,
) -> Optional[ReducibleSet]:
    adjacency = as_adjacency(g)
    if len(adjacency) < k:
        logger.info(f'[Config] 图只有 {len(adjacency)} 个顶点，不存在大小为 {k} 的可约集')
        return None

    if catalog and isinstance(g, PlaneGraph):
        for cfg in catalog:
            for match in match_configuration(g, cfg):
                positions = {}
                for label, v in match.labeled(cfg).items():
                    index = label_index(label, k)
                    if index is not None and 1 <= index <= k:
                        positions[index] = v
                if len(set(positions.values())) != len(positions):
                    continue
                result = verify_reducible(adjacency, complete_seed(adjacency, positions, k), k)
                if result.accepted:
                    logger.info(f'[Config] 由构型 {cfg.name} 得到可约集')
                    return ReducibleSet(result.k, result.vertices, result.counts, None, f'configuration:{cfg.name}')

    found = _seed_search(adjacency, k, settings)
    if found is None:
        logger.info(f'[Config] k={k} 时未找到可约集')
        return None
    return ReducibleSet(found.k, found.vertices, found.counts, None, 'seed-search')


@dataclass(frozen=True)
class CatalogStub:
    name: str
    labels: tuple[str, ...] = ()
    notes: str = ''

    def to_payload(self) -> dict:
        return {'name': self.name, 'labels': list(self.labels), 'notes': self.notes}


@dataclass
class Catalog:
    configurations: list[Configuration] = field(default_factory=list)
    stubs: list[CatalogStub] = field(default_factory=list)


def _catalog_files(directory: Optional[str]) -> list[tuple[str, str]]:
    if directory is not None:
        root = Path(directory)
        if not root.is_dir():
            raise InputError(f'构型目录不存在: {directory}')
        return [(p.name, p.read_text(encoding='utf-8')) for p in sorted(root.glob('*.json'))]
    root = resources.files('equitable.catalog')
    return [
        (entry.name, entry.read_text(encoding='utf-8'))
        for entry in sorted(root.iterdir(), key=lambda e: e.name)
        if entry.name.endswith('.json')
    ]


def load_catalog(directory: Optional[str] = None) -> Catalog:
    """读取构型目录：完整构型进入 configurations，只有文字约束的条目进入 stubs"""
    catalog = Catalog()
    for name, text in _catalog_files(directory):
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as e:
            raise MalformedPattern(f'构型文件 {name} 不是合法 JSON: {e}') from e
        if isinstance(payload, dict) and 'stubs' in payload:
            for stub in payload['stubs']:
                catalog.stubs.append(CatalogStub(stub['name'], tuple(stub.get('labels', ())), stub.get('notes', '')))
            continue
        catalog.configurations.append(parse_configuration(payload))
    logger.info(f'[Config] 构型目录: {len(catalog.configurations)} 个构型, {len(catalog.stubs)} 个占位条目')
    return catalog
