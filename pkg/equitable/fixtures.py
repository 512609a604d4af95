"""测试图生成器与语料库。

生成器先给出直线平面画法的坐标，再按极角给出每个点的旋转；正多面体用三维凸坐标，
绕外法向排序。每个生成的图都会重新跑一遍结构分析，核对声明的性质。
"""
from collections.abc import Mapping
from dataclasses import dataclass, field
from itertools import combinations, product
from math import atan2, cos, pi, sin
from pathlib import Path
from random import Random
from typing import Any, Optional
import json
import logging

from pydantic import BaseModel, ValidationError
import numpy as np

from equitable.degeneracy import degeneracy_ordering
from equitable.errors import BadParams, FixtureMismatch, InputError
from equitable.plane_graph import PlaneGraph, build_plane_graph
from equitable.structure import class_membership

logger = logging.getLogger(__name__)

CORPUS_DIR = Path(__file__).resolve().parent.parent / 'corpus'

KINDS = (
    'path', 'cycle', 'grid', 'hexpatch', 'wheel', 'prism', 'platonic',
    'star', 'tree', 'bipartite', 'flower', 'stacked', 'disjoint-triangles',
    'h-gadget', 'badface-gadget', 'special-face-gadget', 'quad-gadget',
)
PLATONIC = ('tetrahedron', 'cube', 'octahedron', 'dodecahedron', 'icosahedron')

Point = tuple[float, float]


class FixtureModel(BaseModel):
    name: str
    provenance: str = 'curated'
    expected: dict[str, Any] = {}
    graph: dict[str, Any]


@dataclass
class Fixture:
    name: str
    graph: PlaneGraph
    provenance: str = 'generated'
    expected: dict[str, Any] = field(default_factory=dict)

    def to_payload(self) -> dict:
        return {
            'name': self.name,
            'provenance': self.provenance,
            'expected': self.expected,
            'graph': self.graph.to_spec(),
        }


def dump_fixture(fixture: Fixture) -> str:
    return json.dumps(fixture.to_payload(), indent=2) + '\n'


def parse_fixture(text: str) -> Fixture:
    try:
        model = FixtureModel.model_validate(json.loads(text))
    except (json.JSONDecodeError, ValidationError) as e:
        raise InputError(f'测试图文件格式错误: {e}') from e
    return Fixture(model.name, build_plane_graph(model.graph), model.provenance, dict(model.expected))


def load_fixture(path: str) -> Fixture:
    try:
        text = Path(path).read_text(encoding='utf-8')
    except OSError as e:
        raise InputError(f'读取测试图失败: {e}') from e
    return parse_fixture(text)


def measured_properties(g: PlaneGraph) -> dict[str, Any]:
    return {
        'member': class_membership(g).is_member,
        'min_degree': g.min_degree,
        'max_degree': g.max_degree,
        'degeneracy': degeneracy_ordering(g).degeneracy,
    }


def verify_fixture(fixture: Fixture) -> dict[str, Any]:
    measured = measured_properties(fixture.graph)
    diffs = {
        key: {'declared': value, 'measured': measured[key]}
        for key, value in fixture.expected.items()
        if key in measured and measured[key] != value
    }
    if diffs:
        raise FixtureMismatch(f'测试图 {fixture.name} 的声明性质与实测不符: {sorted(diffs)}', diffs)
    return measured


def _rotation_2d(points: Mapping[int, Point], edges) -> dict[int, list[int]]:
    nbrs: dict[int, list[int]] = {v: [] for v in points}
    for u, v in edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    return {
        v: sorted(ns, key=lambda u: atan2(points[u][1] - points[v][1], points[u][0] - points[v][0]))
        for v, ns in nbrs.items()
    }


def _build(points: Mapping[int, Point], edges) -> PlaneGraph:
    rotation = _rotation_2d(points, edges)
    return build_plane_graph({'vertices': sorted(points), 'rotation': rotation})


def _with_leaves(points: dict[int, Point], edges: list, leaves: Mapping[int, int]) -> tuple[dict, list]:
    """在背离核心重心的方向上挂叶子，保证叶子落在外面"""
    cx = sum(p[0] for p in points.values()) / len(points)
    cy = sum(p[1] for p in points.values()) / len(points)
    points, edges = dict(points), list(edges)
    next_id = max(points) + 1
    for v, count in sorted(leaves.items()):
        x, y = points[v]
        base = atan2(y - cy, x - cx)
        for i in range(count):
            angle = base + (i - (count - 1) / 2) * 0.35
            points[next_id] = (x + 0.3 * cos(angle), y + 0.3 * sin(angle))
            edges.append((v, next_id))
            next_id += 1
    return points, edges


def _int(params: Mapping, key: str, lo: int, default: Optional[int] = None) -> int:
    raw = params.get(key, default)
    try:
        value = int(raw)
    except (TypeError, ValueError):
        raise BadParams(f'参数 {key} 必须是整数，收到 {raw!r}') from None
    if value < lo:
        raise BadParams(f'参数 {key} 至少为 {lo}，收到 {value}')
    return value


def _circle(n: int, radius: float = 1.0, offset: float = 0.0) -> list[Point]:
    return [(radius * cos(2 * pi * i / n + offset), radius * sin(2 * pi * i / n + offset)) for i in range(n)]


def path_graph(n: int) -> PlaneGraph:
    return _build({i: (float(i), 0.0) for i in range(n)}, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> PlaneGraph:
    return _build(dict(enumerate(_circle(n))), [(i, (i + 1) % n) for i in range(n)])


def grid_graph(rows: int, cols: int) -> PlaneGraph:
    points = {r * cols + c: (float(c), float(r)) for r in range(rows) for c in range(cols)}
    edges = [(r * cols + c, r * cols + c + 1) for r in range(rows) for c in range(cols - 1)]
    edges += [(r * cols + c, (r + 1) * cols + c) for r in range(rows - 1) for c in range(cols)]
    return _build(points, edges)


def hexpatch_graph(cols: int, rows: int) -> PlaneGraph:
    """砖墙式六边形网格：每行六边形之间交错放竖边，然后反复剪掉度数 <= 1 的点"""
    width = 2 * cols if rows == 1 else 2 * cols + 1
    nodes = {(r, c) for r in range(rows + 1) for c in range(width + 1)}
    edges = {((r, c), (r, c + 1)) for r in range(rows + 1) for c in range(width)}
    edges |= {((r, c), (r + 1, c)) for r in range(rows) for c in range(width + 1) if (c + r) % 2 == 0}
    while True:
        degree = {v: 0 for v in nodes}
        for a, b in edges:
            degree[a] += 1
            degree[b] += 1
        low = {v for v, d in degree.items() if d <= 1}
        if not low:
            break
        nodes -= low
        edges = {(a, b) for a, b in edges if a not in low and b not in low}
    index = {v: i for i, v in enumerate(sorted(nodes))}
    points = {index[(r, c)]: (float(c), float(r)) for r, c in nodes}
    return _build(points, [(index[a], index[b]) for a, b in sorted(edges)])


def wheel_graph(n: int) -> PlaneGraph:
    points = {0: (0.0, 0.0), **{i + 1: p for i, p in enumerate(_circle(n))}}
    edges = [(0, i + 1) for i in range(n)] + [(i + 1, (i + 1) % n + 1) for i in range(n)]
    return _build(points, edges)


def prism_graph(n: int) -> PlaneGraph:
    points = {i: p for i, p in enumerate(_circle(n, 2.0))}
    points.update({n + i: p for i, p in enumerate(_circle(n, 1.0))})
    edges = [(i, (i + 1) % n) for i in range(n)]
    edges += [(n + i, n + (i + 1) % n) for i in range(n)]
    edges += [(i, n + i) for i in range(n)]
    return _build(points, edges)


def star_graph(n: int) -> PlaneGraph:
    points = {0: (0.0, 0.0), **{i + 1: p for i, p in enumerate(_circle(n))}}
    return _build(points, [(0, i + 1) for i in range(n)])


def tree_graph(depth: int) -> PlaneGraph:
    """深度为 depth 的完全二叉树，按中序排横坐标"""
    n = 2 ** (depth + 1) - 1
    points: dict[int, Point] = {}
    counter = [0]

    def place(v: int, level: int) -> None:
        if v >= n:
            return
        place(2 * v + 1, level + 1)
        points[v] = (float(counter[0]), float(-level))
        counter[0] += 1
        place(2 * v + 2, level + 1)

    place(0, 0)
    edges = [(v, c) for v in range(n) for c in (2 * v + 1, 2 * v + 2) if c < n]
    return _build(points, edges)


def bipartite_adjacency(a: int, b: int) -> dict[int, frozenset[int]]:
    """K_{a,b} 的邻接表；a, b >= 3 时不是平面图，只能走邻接表接口"""
    left, right = range(a), range(a, a + b)
    adjacency = {v: frozenset(right) for v in left}
    adjacency.update({v: frozenset(left) for v in right})
    return adjacency


def bipartite_graph(a: int, b: int) -> PlaneGraph:
    if min(a, b) > 2:
        raise BadParams(f'K_{{{a},{b}}} 不是平面图，请使用 bipartite_adjacency')
    if a > b:
        a, b = b, a
    points = {i: (0.0, 1.0 - 2.0 * i) if a == 2 else (0.0, 1.0) for i in range(a)}
    points.update({a + j: (float(j) - (b - 1) / 2, 0.0) for j in range(b)})
    return _build(points, [(i, a + j) for i in range(a) for j in range(b)])


def flower_graph(petals: int) -> PlaneGraph:
    points = {0: (0.0, 0.0)}
    edges = []
    for i in range(petals):
        theta = 2 * pi * i / petals
        width = pi / petals * 0.6
        u, w = 1 + 2 * i, 2 + 2 * i
        points[u] = (cos(theta - width), sin(theta - width))
        points[w] = (cos(theta + width), sin(theta + width))
        edges += [(0, u), (0, w), (u, w)]
    return _build(points, edges)


def stacked_graph(depth: int) -> PlaneGraph:
    points = {0: (0.0, 0.0), 1: (4.0, 0.0), 2: (2.0, 3.0)}
    edges = [(0, 1), (1, 2), (2, 0)]
    tri = [0, 1, 2]
    for v in range(3, 3 + depth):
        points[v] = (
            sum(points[t][0] for t in tri) / 3,
            sum(points[t][1] for t in tri) / 3,
        )
        edges += [(v, t) for t in tri]
        tri = [tri[0], tri[1], v]
    return _build(points, edges)


def disjoint_triangles_graph(count: int) -> PlaneGraph:
    points, edges = {}, []
    for i in range(count):
        a, b, c = 3 * i, 3 * i + 1, 3 * i + 2
        points.update({a: (3.0 * i, 0.0), b: (3.0 * i + 1, 0.0), c: (3.0 * i + 0.5, 1.0)})
        edges += [(a, b), (b, c), (c, a)]
    return _build(points, edges)


def h_gadget() -> PlaneGraph:
    """(4,4,4)-三角形与 (4,4,4,4)-四边形共边，x_k 为公共点且度数恰为 4"""
    # b=0, c=1, a=2, e=3, d=4, w=5
    points = {0: (0.0, 0.0), 1: (1.0, 0.0), 2: (0.5, 0.8), 3: (0.0, -1.0), 4: (1.0, -1.0), 5: (-1.0, 0.0)}
    edges = [(2, 0), (0, 1), (1, 2), (1, 4), (4, 3), (3, 0), (0, 5)]
    points, edges = _with_leaves(points, edges, {2: 2, 1: 1, 4: 2, 3: 2, 5: 3})
    return _build(points, edges)


def _polygon_gadget(degrees: list[int]) -> PlaneGraph:
    n = len(degrees)
    points = dict(enumerate(_circle(n, 1.0, pi / n)))
    edges = [(i, (i + 1) % n) for i in range(n)]
    points, edges = _with_leaves(points, edges, {i: d - 2 for i, d in enumerate(degrees)})
    return _build(points, edges)


def badface_gadget() -> PlaneGraph:
    return _polygon_gadget([3, 3, 5, 5])


def special_face_gadget() -> PlaneGraph:
    return _polygon_gadget([3, 4, 4])


def quad_gadget() -> PlaneGraph:
    return _polygon_gadget([3, 3, 6, 6])


def _platonic_points(name: str) -> np.ndarray:
    phi = (1 + 5 ** 0.5) / 2
    signs = list(product((1, -1), repeat=3))
    if name == 'tetrahedron':
        pts = [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)]
    elif name == 'cube':
        pts = signs
    elif name == 'octahedron':
        pts = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
    elif name == 'icosahedron':
        pts = []
        for s, t in product((1, -1), repeat=2):
            pts += [(0, s, t * phi), (s, t * phi, 0), (t * phi, 0, s)]
    elif name == 'dodecahedron':
        pts = list(signs)
        for s, t in product((1, -1), repeat=2):
            pts += [(0, s / phi, t * phi), (s / phi, t * phi, 0), (t * phi, 0, s / phi)]
    else:
        raise BadParams(f'未知的正多面体: {name!r}', {'known': list(PLATONIC)})
    return np.array(pts, dtype=float)


def platonic_graph(name: str) -> PlaneGraph:
    pts = _platonic_points(name)
    n = len(pts)
    dist = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=-1)
    shortest = dist[~np.eye(n, dtype=bool)].min()
    edges = [(i, j) for i, j in combinations(range(n), 2) if abs(dist[i, j] - shortest) < 1e-9]

    nbrs: dict[int, list[int]] = {v: [] for v in range(n)}
    for i, j in edges:
        nbrs[i].append(j)
        nbrs[j].append(i)
    rotation = {}
    for v in range(n):
        normal = pts[v] / np.linalg.norm(pts[v])
        first = pts[nbrs[v][0]] - pts[v]
        e1 = first - normal * first.dot(normal)
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(normal, e1)
        rotation[v] = sorted(
            nbrs[v],
            key=lambda u: atan2(float((pts[u] - pts[v]).dot(e2)), float((pts[u] - pts[v]).dot(e1))),
        )
    return build_plane_graph({'vertices': list(range(n)), 'rotation': rotation})


def build_kind(kind: str, params: Optional[Mapping] = None) -> PlaneGraph:
    params = params or {}
    if kind == 'path':
        return path_graph(_int(params, 'n', 1))
    if kind == 'cycle':
        return cycle_graph(_int(params, 'n', 3))
    if kind == 'grid':
        return grid_graph(_int(params, 'rows', 1), _int(params, 'cols', 1))
    if kind == 'hexpatch':
        return hexpatch_graph(_int(params, 'cols', 1), _int(params, 'rows', 1))
    if kind == 'wheel':
        return wheel_graph(_int(params, 'n', 3))
    if kind == 'prism':
        return prism_graph(_int(params, 'n', 3))
    if kind == 'platonic':
        return platonic_graph(str(params.get('name', '')))
    if kind == 'star':
        return star_graph(_int(params, 'n', 1))
    if kind == 'tree':
        return tree_graph(_int(params, 'depth', 0))
    if kind == 'bipartite':
        return bipartite_graph(_int(params, 'a', 1), _int(params, 'b', 1))
    if kind == 'flower':
        return flower_graph(_int(params, 'petals', 1))
    if kind == 'stacked':
        return stacked_graph(_int(params, 'depth', 0))
    if kind == 'disjoint-triangles':
        return disjoint_triangles_graph(_int(params, 'count', 1))
    if kind == 'h-gadget':
        return h_gadget()
    if kind == 'badface-gadget':
        return badface_gadget()
    if kind == 'special-face-gadget':
        return special_face_gadget()
    if kind == 'quad-gadget':
        return quad_gadget()
    raise BadParams(f'未知的生成器类型: {kind!r}', {'known': list(KINDS)})


def generate_fixture(
    kind: str,
    params: Optional[Mapping] = None,
    name: Optional[str] = None,
    member: Optional[bool] = None,
) -> Fixture:
    """生成测试图并核对声明的成员资格；其余性质按实测写入 expected"""
    g = build_kind(kind, params)
    measured = measured_properties(g)
    if member is not None and measured['member'] != member:
        raise FixtureMismatch(
            f'{kind} 生成的图成员资格为 {measured["member"]}，声明为 {member}',
            {'kind': kind, 'params': dict(params or {}), 'declared': member},
        )
    label = name or '-'.join([kind, *(str(v) for v in (params or {}).values())])
    logger.debug(f'[Corpus] 生成 {label}: n={g.order}, member={measured["member"]}')
    return Fixture(label, g, 'generated', measured)


@dataclass(frozen=True)
class Recipe:
    name: str
    kind: str
    params: dict = field(default_factory=dict)
    member: Optional[bool] = None


def corpus_manifest() -> list[Recipe]:
    recipes = [Recipe(f'path-{n}', 'path', {'n': n}, True) for n in (2, 5, 8)]
    recipes += [Recipe(f'cycle-{n}', 'cycle', {'n': n}, True) for n in (3, 4, 5, 6, 7, 9)]
    recipes += [Recipe(f'star-{n}', 'star', {'n': n}, True) for n in (6, 7, 9)]
    recipes += [Recipe(f'tree-{d}', 'tree', {'depth': d}, True) for d in (2, 3)]
    recipes += [
        Recipe('grid-2x2', 'grid', {'rows': 2, 'cols': 2}, True),
        Recipe('grid-2x3', 'grid', {'rows': 2, 'cols': 3}, False),
        Recipe('grid-3x3', 'grid', {'rows': 3, 'cols': 3}, False),
        Recipe('grid-4x4', 'grid', {'rows': 4, 'cols': 4}, False),
        Recipe('hexpatch-2x1', 'hexpatch', {'cols': 2, 'rows': 1}, True),
        Recipe('hexpatch-3x1', 'hexpatch', {'cols': 3, 'rows': 1}, True),
        Recipe('hexpatch-2x2', 'hexpatch', {'cols': 2, 'rows': 2}, True),
    ]
    recipes += [Recipe(f'wheel-{n}', 'wheel', {'n': n}, False) for n in (4, 5, 6)]
    recipes += [Recipe(f'prism-{n}', 'prism', {'n': n}, False) for n in (3, 5)]
    recipes += [
        Recipe(name, 'platonic', {'name': name}, name == 'dodecahedron') for name in PLATONIC
    ]
    recipes += [
        Recipe('bipartite-2x3', 'bipartite', {'a': 2, 'b': 3}, True),
        Recipe('bipartite-2x5', 'bipartite', {'a': 2, 'b': 5}, True),
        Recipe('stacked-2', 'stacked', {'depth': 2}, False),
        Recipe('flower-4', 'flower', {'petals': 4}, True),
        Recipe('disjoint-triangles-3', 'disjoint-triangles', {'count': 3}, True),
        Recipe('h-gadget', 'h-gadget', {}, True),
        Recipe('badface-gadget', 'badface-gadget', {}, True),
        Recipe('special-face-gadget', 'special-face-gadget', {}, True),
        Recipe('quad-gadget', 'quad-gadget', {}, True),
    ]
    return recipes


def load_corpus(directory: Optional[str] = None, generated: bool = True) -> list[Fixture]:
    """生成器语料加上目录中的手工测试图，按名称排序"""
    fixtures = [generate_fixture(r.kind, r.params, r.name, r.member) for r in corpus_manifest()] if generated else []
    root = Path(directory) if directory is not None else CORPUS_DIR
    if root.is_dir():
        fixtures += [load_fixture(str(p)) for p in sorted(root.glob('*.json'))]
    logger.info(f'[Corpus] 载入 {len(fixtures)} 个测试图')
    return sorted(fixtures, key=lambda f: f.name)


def random_tree(n: int, rng: Random) -> PlaneGraph:
    """随机树；任何旋转都是平面嵌入"""
    rotation: dict[int, list[int]] = {v: [] for v in range(n)}
    for v in range(1, n):
        parent = rng.randrange(v)
        rotation[v].append(parent)
        rotation[parent].append(v)
    return build_plane_graph({'vertices': list(range(n)), 'rotation': rotation})


def random_cycle(n: int, rng: Random) -> PlaneGraph:
    order = list(range(n))
    rng.shuffle(order)
    rotation = {order[i]: [order[i - 1], order[(i + 1) % n]] for i in range(n)}
    return build_plane_graph({'vertices': list(range(n)), 'rotation': rotation})


def random_cactus(n: int, rng: Random) -> PlaneGraph:
    """随机仙人掌：在已有点上挂悬边或 3~6 长的圈，块之间只共割点，没有带弦的圈"""
    rotation: dict[int, list[int]] = {0: []}
    while len(rotation) < n:
        v = rng.randrange(len(rotation))
        room = n - len(rotation)
        length = rng.choice((2, 3, 4, 5, 6))
        if length == 2 or room < 2:
            w = len(rotation)
            rotation[w] = [v]
            rotation[v].append(w)
            continue
        new = list(range(len(rotation), len(rotation) + min(length - 1, room)))
        ring = [v] + new
        for i, w in enumerate(new, start=1):
            rotation[w] = [ring[i - 1], ring[(i + 1) % len(ring)]]
        # 同一块的两条边在 v 处相邻，保持平面性
        rotation[v] += [new[0], new[-1]]
    return build_plane_graph({'vertices': list(range(n)), 'rotation': rotation})


def random_sparse_wheel(n: int, rng: Random) -> PlaneGraph:
    """轮去掉一部分辐条；轮心至少保留一条"""
    rim = n - 1
    points = {0: (0.0, 0.0), **{i + 1: p for i, p in enumerate(_circle(rim))}}
    spokes = [i + 1 for i in range(rim) if rng.random() < 0.4] or [rng.randrange(rim) + 1]
    edges = [(i + 1, (i + 1) % rim + 1) for i in range(rim)] + [(0, i) for i in spokes]
    return _build(points, edges)


def random_member(rng: Random, lo: int = 7, hi: int = 12, attempts: int = 50) -> PlaneGraph:
    """随机抽一个类成员；带面的生成器抽到非成员就重抽"""
    for _ in range(attempts):
        n = rng.randint(lo, hi)
        kind = rng.choice(('tree', 'cycle', 'cactus', 'sparse-wheel'))
        if kind == 'tree':
            return random_tree(n, rng)
        if kind == 'cycle':
            return random_cycle(n, rng)
        g = random_cactus(n, rng) if kind == 'cactus' else random_sparse_wheel(n, rng)
        if class_membership(g).is_member:
            return g
    return random_tree(rng.randint(lo, hi), rng)
