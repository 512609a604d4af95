from dataclasses import dataclass, field
from typing import Optional
import heapq
import logging

from equitable.errors import PreconditionNotChecked
from equitable.plane_graph import Adjacency, as_adjacency
from equitable.structure import ClassReport

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DegeneracyCertificate:
    degeneracy: int
    ordering: tuple[int, ...]
    back_degrees: tuple[int, ...]
    # 取得最大后向度时剩余的子图
    core: tuple[int, ...] = ()

    def verify(self, adjacency: Adjacency) -> bool:
        later = set(self.ordering)
        for v, claimed in zip(self.ordering, self.back_degrees):
            later.discard(v)
            count = len(adjacency[v] & later)
            if count != claimed or count > self.degeneracy:
                return False
        return max(self.back_degrees, default=0) == self.degeneracy

    def to_payload(self) -> dict:
        return {
            'degeneracy': self.degeneracy,
            'ordering': list(self.ordering),
            'back_degrees': list(self.back_degrees),
            'core': list(self.core),
        }


@dataclass
class DegeneracyCheck:
    passed: bool
    degeneracy: int
    witness_min_degree: Optional[int] = None
    witness_vertices: tuple[int, ...] = ()
    warnings: list[PreconditionNotChecked] = field(default_factory=list)

    def to_payload(self) -> dict:
        return {
            'passed': self.passed,
            'degeneracy': self.degeneracy,
            'witness': None if self.passed else {
                'min_degree': self.witness_min_degree,
                'vertices': list(self.witness_vertices),
            },
            'warnings': [w.to_payload() for w in self.warnings],
        }


def degeneracy_ordering(g) -> DegeneracyCertificate:
    """最小者最后消去：每次删去剩余图中度数最小的点，同度取编号最小者"""
    adjacency = as_adjacency(g)
    remaining = {v: len(nbrs) for v, nbrs in adjacency.items()}
    heap = [(d, v) for v, d in remaining.items()]
    heapq.heapify(heap)

    ordering: list[int] = []
    back: list[int] = []
    best, core_at = 0, 0
    while heap:
        d, v = heapq.heappop(heap)
        if v not in remaining or remaining[v] != d:
            continue
        if d > best or not ordering:
            best, core_at = max(best, d), len(ordering)
        ordering.append(v)
        back.append(d)
        del remaining[v]
        for u in adjacency[v]:
            if u in remaining:
                remaining[u] -= 1
                heapq.heappush(heap, (remaining[u], u))

    cert = DegeneracyCertificate(
        degeneracy=max(back, default=0),
        ordering=tuple(ordering),
        back_degrees=tuple(back),
        core=tuple(sorted(ordering[core_at:])),
    )
    logger.debug(f'[Degeneracy] 退化度 {cert.degeneracy}, 顶点数 {len(ordering)}')
    return cert


def assert_4_degenerate(g, report: Optional[ClassReport] = None) -> DegeneracyCheck:
    warnings = []
    if report is None:
        warnings.append(PreconditionNotChecked('未确认类成员资格，仍计算退化度'))
    elif report.chordal4:
        warnings.append(PreconditionNotChecked('图含弦 4-圈，推论的前提不成立'))
    cert = degeneracy_ordering(g)
    passed = cert.degeneracy <= 4
    if not passed:
        logger.info(f'[Degeneracy] 不是 4-退化的: 退化度 {cert.degeneracy}')
    return DegeneracyCheck(
        passed=passed,
        degeneracy=cert.degeneracy,
        witness_min_degree=None if passed else cert.degeneracy,
        witness_vertices=() if passed else cert.core,
        warnings=warnings,
    )
