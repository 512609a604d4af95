from collections import defaultdict
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from typing import Optional
import logging

import networkx as nx

from equitable.errors import UnsupportedLength
from equitable.plane_graph import DegreeRange, PlaneGraph, degree_profile

logger = logging.getLogger(__name__)

SPECIAL_FACE_PATTERNS = (('3', '3', '5+'), ('3', '4', '4'), ('3', '4', '5'), ('3', '4', '6'))
BAD_FACE_PATTERNS = (('3', '3', '5', '5+'), ('3', '4', '5-', '6-'))

Cycle = tuple[int, ...]


@dataclass(frozen=True, order=True)
class CycleWitness:
    cycle_vertices: Cycle
    chord: tuple[int, int]

    def to_payload(self) -> dict:
        return {'cycle': list(self.cycle_vertices), 'chord': list(self.chord)}


@dataclass
class ClassReport:
    is_member: bool
    chordal4: list[CycleWitness]
    chordal6: list[CycleWitness]
    euler_ok: bool = True
    special_face_count: int = 0

    def to_payload(self) -> dict:
        return {
            'is_member': self.is_member,
            'euler_ok': self.euler_ok,
            'chordal4': [w.to_payload() for w in self.chordal4],
            'chordal6': [w.to_payload() for w in self.chordal6],
            'special_face_count': self.special_face_count,
        }


@dataclass(frozen=True)
class Violation:
    kind: str
    cycles: tuple[Cycle, ...] = ()
    vertex: Optional[int] = None
    face: Optional[int] = None
    detail: str = ''

    def to_payload(self) -> dict:
        payload = {'kind': self.kind, 'cycles': [list(c) for c in self.cycles]}
        if self.vertex is not None:
            payload['vertex'] = self.vertex
        if self.face is not None:
            payload['face'] = self.face
        if self.detail:
            payload['detail'] = self.detail
        return payload


@dataclass(frozen=True)
class FaceProfile:
    face: int
    degree: int
    degree_vector: tuple[int, ...]
    is_special: bool
    is_bad: bool
    adjacent_face_ids: tuple[int, ...]

    def to_payload(self) -> dict:
        return {
            'face': self.face,
            'degree': self.degree,
            'degree_vector': list(self.degree_vector),
            'is_special': self.is_special,
            'is_bad': self.is_bad,
            'adjacent_face_ids': list(self.adjacent_face_ids),
        }


@dataclass(frozen=True)
class VertexProfile:
    vertex: int
    degree: int
    kind: str
    is_bad_3: bool
    n3: int
    n2: int
    weakly_incident_bad_faces: tuple[int, ...] = field(default=())

    def to_payload(self) -> dict:
        return {
            'vertex': self.vertex,
            'degree': self.degree,
            'kind': self.kind,
            'is_bad_3': self.is_bad_3,
            'n3': self.n3,
            'n2': self.n2,
            'weakly_incident_bad_faces': list(self.weakly_incident_bad_faces),
        }


def degree_vector_matches(degrees: Sequence[int], pattern: Sequence[str]) -> bool:
    """把度数多重集与槽位记号做匹配（槽位顺序无关）"""
    if len(degrees) != len(pattern):
        return False
    ranges = [DegreeRange.parse(tok) for tok in pattern]
    return any(all(d in r for d, r in zip(perm, ranges)) for perm in set(permutations(degrees)))


def canonical_cycle(cycle: Sequence[int]) -> Cycle:
    """取所有旋转与反射中字典序最小者"""
    n = len(cycle)
    best = None
    for seq in (list(cycle), list(reversed(cycle))):
        for i in range(n):
            cand = tuple(seq[i:] + seq[:i])
            if best is None or cand < best:
                best = cand
    return best


def _cycle_edges(cycle: Cycle) -> frozenset[tuple[int, int]]:
    n = len(cycle)
    return frozenset(tuple(sorted((cycle[i], cycle[(i + 1) % n]))) for i in range(n))


def enumerate_cycles(g: PlaneGraph, max_length: int) -> dict[int, list[Cycle]]:
    """长度不超过 max_length 的全部简单圈，按长度分组并规范化"""
    by_length: dict[int, set[Cycle]] = defaultdict(set)
    for cycle in nx.simple_cycles(g.to_networkx(), length_bound=max_length):
        if len(cycle) >= 3:
            by_length[len(cycle)].add(canonical_cycle(cycle))
    return {k: sorted(v) for k, v in by_length.items()}


def find_chordal_cycles(g: PlaneGraph, length: int) -> list[CycleWitness]:
    if length not in (4, 6):
        raise UnsupportedLength(f'只支持长度 4 或 6 的弦圈检测，收到 {length}', {'length': length})
    witnesses = []
    for cycle in enumerate_cycles(g, length).get(length, []):
        on_cycle = _cycle_edges(cycle)
        for a, b in combinations(sorted(cycle), 2):
            if g.has_edge(a, b) and (a, b) not in on_cycle:
                witnesses.append(CycleWitness(cycle, (a, b)))
    return sorted(witnesses)


def class_membership(g: PlaneGraph) -> ClassReport:
    chordal4 = find_chordal_cycles(g, 4)
    chordal6 = find_chordal_cycles(g, 6)
    faces, _ = classify_faces_and_vertices(g)
    report = ClassReport(
        is_member=not chordal4 and not chordal6,
        chordal4=chordal4,
        chordal6=chordal6,
        special_face_count=sum(1 for f in faces if f.is_special),
    )
    logger.info(
        f'[Structure] 类成员判定: member={report.is_member}, '
        f'弦 4-圈 {len(chordal4)} 个, 弦 6-圈 {len(chordal6)} 个'
    )
    return report


def _normally_adjacent(a: Cycle, b: Cycle) -> bool:
    # 只沿一条公共边相接：共享一条边且顶点交恰为两端点
    return len(set(a) & set(b)) == 2 and bool(_cycle_edges(a) & _cycle_edges(b))


def _adjacent_pairs(first: list[Cycle], second: list[Cycle]) -> list[tuple[Cycle, Cycle]]:
    by_edge: dict[tuple[int, int], list[Cycle]] = defaultdict(list)
    for c in second:
        for e in _cycle_edges(c):
            by_edge[e].append(c)
    pairs = set()
    for a in first:
        for e in _cycle_edges(a):
            for b in by_edge[e]:
                if a != b and _normally_adjacent(a, b):
                    pairs.add((a, b) if len(a) != len(b) else tuple(sorted((a, b))))
    return sorted(pairs)


def lemma1_audit(g: PlaneGraph, report: Optional[ClassReport] = None) -> list[Violation]:
    """列出相邻短圈模式与 d(v)>=8 时的面数不等式违例；成员图应当为空"""
    if report is None:
        report = class_membership(g)
    profile = degree_profile(g)
    cycles = enumerate_cycles(g, 5)
    tri, quad, pent = cycles.get(3, []), cycles.get(4, []), cycles.get(5, [])
    violations: list[Violation] = []

    for a, b in _adjacent_pairs(tri, tri):
        violations.append(Violation('3-cycle adjacent to 3-cycle', (a, b)))

    tri_by_quad: dict[Cycle, list[Cycle]] = defaultdict(list)
    for t, q in _adjacent_pairs(tri, quad):
        tri_by_quad[q].append(t)
    for q in sorted(tri_by_quad):
        if len(tri_by_quad[q]) >= 2:
            violations.append(Violation('4-cycle adjacent to two 3-cycles', (q, *sorted(tri_by_quad[q]))))

    if profile.min_degree >= 3:
        for t, p in _adjacent_pairs(tri, pent):
            violations.append(Violation('3-cycle adjacent to 5-cycle', (t, p)))
        for a, b in _adjacent_pairs(quad, quad):
            violations.append(Violation('4-cycle adjacent to 4-cycle', (a, b)))
        for f in g.faces:
            if f.degree != 3 or not any(g.degree(v) == 3 for v in f.vertices):
                continue
            if not any(profile.face_degree[h] >= 6 for h, _ in g.face_adjacency[f.id]):
                violations.append(Violation('triangle-without-6-face', face=f.id))

    for v in g.vertex_ids:
        d = g.degree(v)
        if d < 8:
            continue
        f3, f4 = profile.f(3, v), profile.f(4, v)
        if f3 + f4 > Fraction(3, 4) * d:
            violations.append(Violation('f3+f4 > 3d/4', vertex=v, detail=f'f3={f3}, f4={f4}, d={d}'))
        if f3 > Fraction(1, 2) * d:
            violations.append(Violation('f3 > d/2', vertex=v, detail=f'f3={f3}, d={d}'))

    if report.is_member and violations:
        logger.warning(f'[Structure] 成员图出现 {len(violations)} 处相邻圈违例')
    return violations


def classify_faces_and_vertices(g: PlaneGraph) -> tuple[list[FaceProfile], list[VertexProfile]]:
    degree = {v: g.degree(v) for v in g.vertex_ids}
    faces = []
    for f in g.faces:
        vector = tuple(sorted(degree[v] for v in f.walk_vertices)) if f.degree else ()
        is_special = f.degree == 3 and any(degree_vector_matches(vector, p) for p in SPECIAL_FACE_PATTERNS)
        is_bad = f.degree == 4 and any(degree_vector_matches(vector, p) for p in BAD_FACE_PATTERNS)
        faces.append(FaceProfile(
            face=f.id,
            degree=f.degree,
            degree_vector=vector,
            is_special=is_special,
            is_bad=is_bad,
            adjacent_face_ids=tuple(h for h, _ in g.face_adjacency[f.id]),
        ))

    special_faces = {p.face for p in faces if p.is_special}
    bad_faces = {p.face for p in faces if p.is_bad}

    kinds: dict[int, str] = {}
    bad3: dict[int, list[int]] = defaultdict(list)
    for v in g.vertex_ids:
        incident = g.incident_faces[v]
        if degree[v] == 3:
            kinds[v] = 'special-3' if any(fid in special_faces for fid in incident) else 'simple-3'
            for fid in incident:
                if fid in bad_faces:
                    bad3[v].append(fid)
        elif degree[v] == 2:
            kinds[v] = 'special-2' if any(degree[u] in (3, 4) for u in g.neighbors(v)) else 'simple-2'
        else:
            kinds[v] = 'other'

    weakly: dict[int, set[int]] = defaultdict(set)
    for w, fids in bad3.items():
        for fid in fids:
            on_face = g.faces[fid].vertices
            for v in g.neighbors(w):
                if v not in on_face:
                    weakly[v].add(fid)

    vertices = [
        VertexProfile(
            vertex=v,
            degree=degree[v],
            kind=kinds[v],
            is_bad_3=v in bad3,
            n3=sum(1 for u in g.neighbors(v) if kinds[u] == 'simple-3'),
            n2=sum(1 for u in g.neighbors(v) if kinds[u] == 'simple-2'),
            weakly_incident_bad_faces=tuple(sorted(weakly.get(v, ()))),
        )
        for v in g.vertex_ids
    ]
    return faces, vertices
