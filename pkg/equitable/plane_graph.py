from collections import Counter, defaultdict
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Optional, Union
import json
import logging
import re

import networkx as nx

from equitable.errors import (
    DuplicateNeighbor,
    DuplicateVertex,
    EulerViolation,
    InputError,
    NonSymmetricAdjacency,
    SelfLoop,
)

logger = logging.getLogger(__name__)

Dart = tuple[int, int]

_TOKEN = re.compile(r'^\s*(\d+)\s*(\+|--|-)?\s*$')


@dataclass(frozen=True)
class DegreeRange:
    """度数记号：'4' 恰为 4，'4+' 至少 4，'5-' 介于 2 与 5，'3--' 介于 1 与 3"""

    lo: int
    hi: Optional[int]

    @classmethod
    def parse(cls, token: Union[str, int]) -> 'DegreeRange':
        if isinstance(token, int):
            return cls(token, token)
        m = _TOKEN.match(token)
        if not m:
            raise InputError(f'无法解析的度数记号: {token!r}')
        k = int(m.group(1))
        suffix = m.group(2)
        if suffix == '+':
            return cls(k, None)
        if suffix == '-':
            return cls(2, k)
        if suffix == '--':
            return cls(1, k)
        return cls(k, k)

    def __contains__(self, degree: int) -> bool:
        if degree < self.lo:
            return False
        return self.hi is None or degree <= self.hi

    def __str__(self) -> str:
        if self.hi is None:
            return f'{self.lo}+'
        if self.lo == self.hi:
            return str(self.lo)
        if self.lo == 1:
            return f'{self.hi}--'
        if self.lo == 2:
            return f'{self.hi}-'
        return f'[{self.lo},{self.hi}]'


def is_class(degree: int, token: Union[str, int]) -> bool:
    return degree in DegreeRange.parse(token)


@dataclass(frozen=True)
class Face:
    id: int
    boundary_walk: tuple[tuple[int, Dart], ...]
    component: int
    # 孤立点没有边界，用 anchor 记住它所在的点
    anchor: Optional[int] = None

    @property
    def degree(self) -> int:
        return len(self.boundary_walk)

    @property
    def walk_vertices(self) -> tuple[int, ...]:
        if not self.boundary_walk and self.anchor is not None:
            return (self.anchor,)
        return tuple(v for v, _ in self.boundary_walk)

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self.walk_vertices)

    @property
    def darts(self) -> tuple[Dart, ...]:
        return tuple(d for _, d in self.boundary_walk)


@dataclass(frozen=True)
class DegreeProfile:
    vertex_degree: dict[int, int]
    face_degree: dict[int, int]
    max_degree: int
    min_degree: int
    faces_by_size: dict[int, Counter]      # f_i(v)
    vertices_by_degree: dict[int, Counter]  # n_i(f)
    face_min_degree: dict[int, int]         # δ(f)
    face_notation: dict[int, str]

    def vertex_label(self, v: int) -> str:
        return f'{self.vertex_degree[v]}-vertex'

    def vertex_is(self, v: int, token: Union[str, int]) -> bool:
        return is_class(self.vertex_degree[v], token)

    def face_is(self, f: int, token: Union[str, int]) -> bool:
        return is_class(self.face_degree[f], token)

    def f(self, i: int, v: int) -> int:
        return self.faces_by_size[v].get(i, 0)

    def n(self, i: int, f: int) -> int:
        return self.vertices_by_degree[f].get(i, 0)


class PlaneGraph:
    """由旋转系统给出的平面图；构建后不可变"""

    def __init__(self, vertex_ids: tuple[int, ...], rotation: dict[int, tuple[int, ...]]):
        self.vertex_ids = vertex_ids
        self.rotation = rotation
        self._pos = {v: {u: i for i, u in enumerate(rot)} for v, rot in rotation.items()}
        self.component_index = _components(vertex_ids, rotation)
        self.faces: tuple[Face, ...] = ()

    def __repr__(self) -> str:
        return f'PlaneGraph(n={self.order}, m={self.size}, faces={len(self.faces)})'

    @property
    def order(self) -> int:
        return len(self.vertex_ids)

    @property
    def size(self) -> int:
        return sum(len(r) for r in self.rotation.values()) // 2

    def degree(self, v: int) -> int:
        return len(self.rotation[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.rotation[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._pos.get(u, {})

    @cached_property
    def adjacency(self) -> dict[int, frozenset[int]]:
        return {v: frozenset(self.rotation[v]) for v in self.vertex_ids}

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted((u, v) for u in self.vertex_ids for v in self.rotation[u] if u < v))

    @property
    def max_degree(self) -> int:
        return max((self.degree(v) for v in self.vertex_ids), default=0)

    @property
    def min_degree(self) -> int:
        return min((self.degree(v) for v in self.vertex_ids), default=0)

    @property
    def component_count(self) -> int:
        return len(set(self.component_index.values()))

    def next_dart(self, dart: Dart) -> Dart:
        u, v = dart
        rot = self.rotation[v]
        return v, rot[(self._pos[v][u] + 1) % len(rot)]

    @cached_property
    def dart_face(self) -> dict[Dart, int]:
        return {d: f.id for f in self.faces for d in f.darts}

    @cached_property
    def incident_faces(self) -> dict[int, tuple[int, ...]]:
        table: dict[int, list[int]] = {v: [] for v in self.vertex_ids}
        for f in self.faces:
            for v in sorted(f.vertices):
                table[v].append(f.id)
        return {v: tuple(ids) for v, ids in table.items()}

    @cached_property
    def face_adjacency(self) -> dict[int, tuple[tuple[int, tuple[int, int]], ...]]:
        """每条公共边记一次：face -> ((邻面, 公共边), ...)"""
        table: dict[int, list[tuple[int, tuple[int, int]]]] = {f.id: [] for f in self.faces}
        for u, v in self.edges:
            left, right = self.dart_face[(u, v)], self.dart_face[(v, u)]
            if left != right:
                table[left].append((right, (u, v)))
                table[right].append((left, (u, v)))
        return {f: tuple(sorted(entries)) for f, entries in table.items()}

    def component_vertices(self) -> dict[int, list[int]]:
        groups: dict[int, list[int]] = defaultdict(list)
        for v in self.vertex_ids:
            groups[self.component_index[v]].append(v)
        return dict(groups)

    def subgraph_without(self, removed: Iterable[int]) -> 'PlaneGraph':
        gone = set(removed)
        rotation = {
            v: [u for u in self.rotation[v] if u not in gone]
            for v in self.vertex_ids if v not in gone
        }
        return build_plane_graph({'vertices': sorted(rotation), 'rotation': rotation})

    def to_spec(self) -> dict[str, Any]:
        return {
            'vertices': list(self.vertex_ids),
            'rotation': {str(v): list(self.rotation[v]) for v in self.vertex_ids},
        }

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertex_ids)
        g.add_edges_from(self.edges)
        return g


def _components(vertex_ids: tuple[int, ...], rotation: Mapping[int, Iterable[int]]) -> dict[int, int]:
    index: dict[int, int] = {}
    next_id = 0
    for root in vertex_ids:
        if root in index:
            continue
        index[root] = next_id
        stack = [root]
        while stack:
            v = stack.pop()
            for u in rotation[v]:
                if u not in index:
                    index[u] = next_id
                    stack.append(u)
        next_id += 1
    return index


def build_plane_graph(spec: Mapping[str, Any]) -> PlaneGraph:
    """校验旋转系统并追踪所有面"""
    try:
        raw_vertices = [int(v) for v in spec['vertices']]
        raw_rotation = {int(k): [int(u) for u in nbrs] for k, nbrs in spec['rotation'].items()}
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f'图描述格式错误: {e}') from e

    if len(set(raw_vertices)) != len(raw_vertices):
        dup = sorted(v for v, c in Counter(raw_vertices).items() if c > 1)
        raise DuplicateVertex(f'顶点重复出现: {dup}', {'vertices': dup})
    known = set(raw_vertices)
    missing = sorted(known - raw_rotation.keys())
    extra = sorted(raw_rotation.keys() - known)
    if missing or extra:
        raise InputError(f'旋转系统与顶点表不一致: 缺少 {missing}, 多出 {extra}')

    for v, nbrs in raw_rotation.items():
        if v in nbrs:
            raise SelfLoop(f'顶点 {v} 存在自环', {'vertex': v})
        if len(set(nbrs)) != len(nbrs):
            dup = sorted(u for u, c in Counter(nbrs).items() if c > 1)
            raise DuplicateNeighbor(f'顶点 {v} 重复列出邻点 {dup}', {'vertex': v, 'neighbors': dup})
        for u in nbrs:
            if u not in known:
                raise InputError(f'顶点 {v} 的邻点 {u} 不在顶点表中')
            if v not in raw_rotation[u]:
                raise NonSymmetricAdjacency(f'{v} 列出了 {u}，但 {u} 未列出 {v}', {'edge': [v, u]})

    vertex_ids = tuple(sorted(raw_vertices))
    rotation = {v: tuple(raw_rotation[v]) for v in vertex_ids}
    g = PlaneGraph(vertex_ids, rotation)
    g.faces = tuple(trace_faces(g))
    _check_euler(g)
    logger.debug(f'[PlaneGraph] 构建完成: {g!r}')
    return g


def trace_faces(g: PlaneGraph) -> list[Face]:
    """按 next-edge 规则追踪面：沿 (u,v) 到达 v 后，取 v 的旋转中 u 之后的邻点离开"""
    faces: list[Face] = []
    seen: set[Dart] = set()
    for v in g.vertex_ids:
        if not g.rotation[v]:
            faces.append(Face(len(faces), (), g.component_index[v], anchor=v))
            continue
        for u in g.rotation[v]:
            start = (v, u)
            if start in seen:
                continue
            walk = []
            dart = start
            while dart not in seen:
                seen.add(dart)
                walk.append((dart[0], dart))
                dart = g.next_dart(dart)
            faces.append(Face(len(faces), tuple(walk), g.component_index[v]))
    return faces


def _check_euler(g: PlaneGraph) -> None:
    vs: Counter = Counter(g.component_index.values())
    es: Counter = Counter(g.component_index[u] for u, _ in g.edges)
    fs: Counter = Counter(f.component for f in g.faces)
    for c in sorted(vs):
        chi = vs[c] - es[c] + fs[c]
        if chi != 2:
            raise EulerViolation(
                f'连通分支 {c} 的欧拉示性数为 {chi}（应为 2），旋转系统不是平面嵌入',
                {'component': c, 'V': vs[c], 'E': es[c], 'F': fs[c]},
            )


def degree_profile(g: PlaneGraph) -> DegreeProfile:
    vertex_degree = {v: g.degree(v) for v in g.vertex_ids}
    face_degree = {f.id: f.degree for f in g.faces}
    faces_by_size = {v: Counter(face_degree[fid] for fid in g.incident_faces[v]) for v in g.vertex_ids}
    vertices_by_degree = {f.id: Counter(vertex_degree[v] for v in f.vertices) for f in g.faces}
    face_min_degree = {f.id: min(vertex_degree[v] for v in f.vertices) for f in g.faces}
    face_notation = {
        f.id: '(' + ','.join(str(vertex_degree[v]) for v in sorted(f.walk_vertices, key=vertex_degree.get)) + ')'
        for f in g.faces
    }
    return DegreeProfile(
        vertex_degree=vertex_degree,
        face_degree=face_degree,
        max_degree=g.max_degree,
        min_degree=g.min_degree,
        faces_by_size=faces_by_size,
        vertices_by_degree=vertices_by_degree,
        face_min_degree=face_min_degree,
        face_notation=face_notation,
    )


Adjacency = dict[int, frozenset[int]]


def as_adjacency(g: Union[PlaneGraph, nx.Graph, Mapping[int, Iterable[int]]]) -> Adjacency:
    """着色与可约集只需要邻接关系，允许直接传入非平面图"""
    if isinstance(g, PlaneGraph):
        return g.adjacency
    if isinstance(g, nx.Graph):
        return {int(v): frozenset(int(u) for u in g.neighbors(v)) for v in g.nodes}
    return {int(v): frozenset(int(u) for u in nbrs) for v, nbrs in g.items()}


def load_graph(path: str) -> PlaneGraph:
    try:
        with open(path, encoding='utf-8') as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise InputError(f'读取图文件失败: {e}') from e
    return build_plane_graph(payload)


def parse_graph(text: str) -> PlaneGraph:
    """插件参数里的图以 JSON 字符串传入"""
    try:
        payload = json.loads(text)
    except (TypeError, json.JSONDecodeError) as e:
        raise InputError(f'图 JSON 解析失败: {e}') from e
    return build_plane_graph(payload)


def dump_graph(g: PlaneGraph) -> str:
    return json.dumps(g.to_spec(), indent=2) + '\n'
