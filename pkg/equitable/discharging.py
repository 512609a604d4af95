"""电荷方案、声明式放电规则表与转移账本。

转移日志按规则编号排序（同字母前缀内按数字，R2 在 R10 之前），再按来源、去向与经由的边排序。
"""
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Literal, Optional, Union
import json
import logging
import re

from pydantic import BaseModel, ValidationError, field_validator

from equitable.errors import AmbiguousRule, InputError, TotalMismatch
from equitable.plane_graph import DegreeRange, PlaneGraph
from equitable.structure import FaceProfile, VertexProfile, classify_faces_and_vertices, degree_vector_matches

logger = logging.getLogger(__name__)

RULESET_ALIASES = {
    'D': 'D',
    'R1': 'R-case1',
    'R3': 'R-case3',
    'R2v': 'R-case2-variant',
    'R4v': 'R-case4-variant',
}
RULESETS = tuple(RULESET_ALIASES.values())

ALLOWANCES = ('special_3_vertex', 'special_face', 'special_2_vertex', 'one_vertex')

# 2-点簇的下界：Case 2 为 -22/3，Case 4.1.1 为 -6
CLUSTER_FLOORS = {
    'R-case2-variant': Fraction(-22, 3),
    'R-case4-variant': Fraction(-6),
}

_RULE_ID = re.compile(r'([A-Za-z]*)(\d*)(.*)')


def rule_key(rule: str) -> tuple[str, int, str]:
    prefix, number, rest = _RULE_ID.fullmatch(rule).groups()
    return prefix, int(number) if number else -1, rest


@dataclass(frozen=True)
class ChargeScheme:
    name: str
    vertex_coeff: tuple[int, int]
    face_coeff: tuple[int, int]
    expected_total: int

    def vertex_charge(self, degree: int) -> Fraction:
        a, b = self.vertex_coeff
        return Fraction(a * degree + b)

    def face_charge(self, degree: int) -> Fraction:
        a, b = self.face_coeff
        return Fraction(a * degree + b)


SCHEME_A = ChargeScheme('A', (2, -6), (1, -6), -12)
SCHEME_B = ChargeScheme('B', (3, -10), (2, -10), -20)
SCHEMES = {'A': SCHEME_A, 'B': SCHEME_B}


def get_scheme(name: Union[str, ChargeScheme]) -> ChargeScheme:
    if isinstance(name, ChargeScheme):
        return name
    try:
        return SCHEMES[str(name).upper()]
    except KeyError:
        raise InputError(f'未知的初始电荷方案: {name!r}（可选 A 或 B）') from None


@dataclass(frozen=True, order=True)
class Element:
    kind: str  # 'v' 或 'f'
    id: int

    def __str__(self) -> str:
        return f'{self.kind}{self.id}'


def vertex(v: int) -> Element:
    return Element('v', v)


def face(f: int) -> Element:
    return Element('f', f)


@dataclass(frozen=True)
class Transfer:
    rule: str
    source: Element
    sink: Element
    amount: Fraction
    via: Optional[tuple[int, int]] = None

    def to_payload(self) -> dict:
        payload = {
            'rule': self.rule,
            'source': str(self.source),
            'sink': str(self.sink),
            'amount': str(self.amount),
        }
        if self.via is not None:
            payload['via'] = list(self.via)
        return payload


class ReceiverSelector(BaseModel):
    degree: Optional[str] = None
    kind: Optional[str] = None
    # 恰好邻接多少个 3-- 点
    low_neighbors: Optional[int] = None


class RuleRow(BaseModel):
    rule: str
    kind: Literal['vertex_to_face', 'vertex_to_vertex', 'face_to_face', 'vertex_to_weak_bad_face']
    giver: Optional[str] = None
    face_degree: Optional[str] = None
    patterns: list[str] = []
    receiver: Optional[ReceiverSelector] = None
    amount: str
    otherwise: bool = False
    scope: Literal['all', 'no_two_vertex', 'two_vertex'] = 'all'
    single_adjacent_quad: bool = False

    @field_validator('amount')
    @classmethod
    def _check_amount(cls, v: str) -> str:
        try:
            q = Fraction(v)
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f'无法解析的电荷量 {v!r}') from e
        if q < 0:
            raise ValueError(f'电荷量不能为负: {v}')
        return v

    @field_validator('giver', 'face_degree')
    @classmethod
    def _check_token(cls, v: Optional[str]) -> Optional[str]:
        if v is not None:
            DegreeRange.parse(v)
        return v

    @property
    def charge(self) -> Fraction:
        return Fraction(self.amount)

    def pattern_slots(self) -> list[list[str]]:
        return [[tok.strip() for tok in p.split(',')] for p in self.patterns]


class RuleTable(BaseModel):
    ruleset: str
    scheme: Literal['A', 'B']
    description: str = ''
    rows: list[RuleRow]


def load_rule_table(name: str) -> RuleTable:
    """按规则集名称（或别名）读取内置规则表；也接受一个 JSON 文件路径"""
    path = Path(name)
    try:
        if path.suffix == '.json' and path.exists():
            raw = path.read_text(encoding='utf-8')
        else:
            ruleset = RULESET_ALIASES.get(name, name)
            if ruleset not in RULESETS:
                raise InputError(f'未知的规则集: {name!r}', {'known': list(RULESETS)})
            raw = resources.files('equitable.rules').joinpath(f'{ruleset}.json').read_text(encoding='utf-8')
        return RuleTable.model_validate(json.loads(raw))
    except (OSError, json.JSONDecodeError, ValidationError) as e:
        raise InputError(f'规则表 {name!r} 读取失败: {e}') from e


@dataclass
class ChargeLedger:
    scheme: ChargeScheme
    graph: PlaneGraph = field(repr=False, compare=False)
    initial: dict[Element, Fraction]
    components: dict[Element, int]
    transfers: list[Transfer] = field(default_factory=list)
    rulesets: list[str] = field(default_factory=list)

    @property
    def ruleset(self) -> Optional[str]:
        return self.rulesets[-1] if self.rulesets else None

    @property
    def final(self) -> dict[Element, Fraction]:
        result = dict(self.initial)
        for t in self.transfers:
            result[t.source] -= t.amount
            result[t.sink] += t.amount
        return result

    def total(self, which: str = 'final') -> Fraction:
        values = self.final if which == 'final' else self.initial
        return sum(values.values(), Fraction(0))

    def component_totals(self, which: str = 'final') -> dict[int, Fraction]:
        values = self.final if which == 'final' else self.initial
        totals: dict[int, Fraction] = defaultdict(Fraction)
        for el, q in values.items():
            totals[self.components[el]] += q
        return dict(sorted(totals.items()))

    def to_payload(self) -> dict:
        final = self.final
        return {
            'scheme': self.scheme.name,
            'rulesets': list(self.rulesets),
            'initial': {str(el): str(q) for el, q in sorted(self.initial.items())},
            'transfers': [t.to_payload() for t in self.transfers],
            'final': {str(el): str(q) for el, q in sorted(final.items())},
            'total_initial': str(self.total('initial')),
            'total_final': str(self.total('final')),
        }


def initial_charges(g: PlaneGraph, scheme: Union[str, ChargeScheme]) -> ChargeLedger:
    scheme = get_scheme(scheme)
    initial: dict[Element, Fraction] = {}
    components: dict[Element, int] = {}
    for v in g.vertex_ids:
        initial[vertex(v)] = scheme.vertex_charge(g.degree(v))
        components[vertex(v)] = g.component_index[v]
    for f in g.faces:
        initial[face(f.id)] = scheme.face_charge(f.degree)
        components[face(f.id)] = f.component

    ledger = ChargeLedger(scheme=scheme, graph=g, initial=initial, components=components)
    for c, total in ledger.component_totals('initial').items():
        if total != scheme.expected_total:
            raise TotalMismatch(
                f'连通分支 {c} 的初始电荷和为 {total}，方案 {scheme.name} 应为 {scheme.expected_total}',
                {'component': c, 'total': str(total), 'expected': scheme.expected_total},
            )
    logger.info(f'[Discharge] 方案 {scheme.name} 初始电荷: {len(initial)} 个元素, 总和 {ledger.total("initial")}')
    return ledger


class _RuleContext:
    """一次规则应用所需的图上事实，按需计算一次"""

    def __init__(self, g: PlaneGraph):
        self.g = g
        face_profiles, vertex_profiles = classify_faces_and_vertices(g)
        self.faces: dict[int, FaceProfile] = {p.face: p for p in face_profiles}
        self.vertices: dict[int, VertexProfile] = {p.vertex: p for p in vertex_profiles}
        self.two_vertex_faces = {
            f.id for f in g.faces if any(g.degree(v) == 2 for v in f.vertices)
        }
        self.low_neighbors = {
            v: sum(1 for u in g.neighbors(v) if 1 <= g.degree(u) <= 3) for v in g.vertex_ids
        }

    def face_ok(self, row: RuleRow, fid: int) -> bool:
        profile = self.faces[fid]
        if row.face_degree is not None and profile.degree not in DegreeRange.parse(row.face_degree):
            return False
        has_two = fid in self.two_vertex_faces
        if row.scope == 'two_vertex' and not has_two:
            return False
        if row.scope == 'no_two_vertex' and has_two:
            return False
        if row.patterns:
            return any(degree_vector_matches(profile.degree_vector, slots) for slots in row.pattern_slots())
        return True

    def receiver_ok(self, row: RuleRow, u: int) -> bool:
        sel = row.receiver
        if sel is None:
            return True
        if sel.degree is not None and self.g.degree(u) not in DegreeRange.parse(sel.degree):
            return False
        if sel.kind is not None and self.vertices[u].kind != sel.kind:
            return False
        if sel.low_neighbors is not None and self.low_neighbors[u] != sel.low_neighbors:
            return False
        return True


Key = tuple[Element, Element, Optional[tuple[int, int]]]


def _row_matches(row: RuleRow, ctx: _RuleContext) -> list[Key]:
    g = ctx.g
    giver = DegreeRange.parse(row.giver) if row.giver is not None else None
    keys: list[Key] = []
    if row.kind == 'face_to_face':
        for f in g.faces:
            if giver is not None and f.degree not in giver:
                continue
            for h, edge in g.face_adjacency[f.id]:
                if ctx.face_ok(row, h):
                    keys.append((face(f.id), face(h), edge))
        return keys

    for v in g.vertex_ids:
        if giver is not None and g.degree(v) not in giver:
            continue
        if row.kind == 'vertex_to_face':
            keys.extend((vertex(v), face(fid), None) for fid in g.incident_faces[v] if ctx.face_ok(row, fid))
        elif row.kind == 'vertex_to_vertex':
            keys.extend((vertex(v), vertex(u), None) for u in g.neighbors(v) if ctx.receiver_ok(row, u))
        else:
            keys.extend((vertex(v), face(fid), None) for fid in ctx.vertices[v].weakly_incident_bad_faces)
    return keys


def _resolve(rule: str, rows: list[RuleRow], ctx: _RuleContext) -> dict[Key, Fraction]:
    primary: dict[Key, set[Fraction]] = defaultdict(set)
    fallback: dict[Key, set[Fraction]] = defaultdict(set)
    flagged: set[Key] = set()
    for row in rows:
        bucket = fallback if row.otherwise else primary
        for key in _row_matches(row, ctx):
            bucket[key].add(row.charge)
            if row.single_adjacent_quad:
                flagged.add(key)

    amounts: dict[Key, Fraction] = {}
    for bucket, skip in ((primary, set()), (fallback, set(primary))):
        for key, values in bucket.items():
            if key in skip:
                continue
            if len(values) > 1:
                source, sink, _ = key
                raise AmbiguousRule(
                    f'规则 {rule} 对 ({source}, {sink}) 给出了不同的电荷量 {sorted(map(str, values))}',
                    {'rule': rule, 'source': str(source), 'sink': str(sink), 'amounts': sorted(map(str, values))},
                )
            amounts[key] = next(iter(values))

    if flagged:
        _keep_one_quad_per_cluster(amounts, flagged, ctx.g)
    return amounts


def _keep_one_quad_per_cluster(amounts: dict[Key, Fraction], flagged: set[Key], g: PlaneGraph) -> None:
    """同一点处相邻的 4-面只有编号最小的一个收到电荷"""
    by_giver: dict[Element, list[Key]] = defaultdict(list)
    for key in flagged:
        if amounts.get(key, 0) > 0:
            by_giver[key[0]].append(key)

    for giver, keys in by_giver.items():
        quads = {fid for fid in g.incident_faces[giver.id] if g.faces[fid].degree == 4}
        cluster: dict[int, int] = {}
        for root in sorted(quads):
            if root in cluster:
                continue
            stack = [root]
            cluster[root] = root
            while stack:
                fid = stack.pop()
                for h, _ in g.face_adjacency[fid]:
                    if h in quads and h not in cluster:
                        cluster[h] = root
                        stack.append(h)
        winners: dict[int, int] = {}
        for key in keys:
            fid = key[1].id
            root = cluster[fid]
            winners[root] = min(winners.get(root, fid), fid)
        for key in keys:
            if winners[cluster[key[1].id]] != key[1].id:
                del amounts[key]


def apply_ruleset(g: PlaneGraph, ledger: ChargeLedger, ruleset: Union[str, RuleTable]) -> ChargeLedger:
    table = ruleset if isinstance(ruleset, RuleTable) else load_rule_table(ruleset)
    if table.scheme != ledger.scheme.name:
        logger.warning(f'[Discharge] 规则集 {table.ruleset} 按方案 {table.scheme} 设计，当前账本为方案 {ledger.scheme.name}')

    ctx = _RuleContext(g)
    by_rule: dict[str, list[RuleRow]] = defaultdict(list)
    for row in table.rows:
        by_rule[row.rule].append(row)

    transfers: list[Transfer] = []
    for rule, rows in by_rule.items():
        for (source, sink, via), amount in _resolve(rule, rows, ctx).items():
            if amount > 0:
                transfers.append(Transfer(rule, source, sink, amount, via))
    transfers.sort(key=lambda t: (rule_key(t.rule), t.source, t.sink, t.via or (-1, -1)))

    result = ChargeLedger(
        scheme=ledger.scheme,
        graph=g,
        initial=dict(ledger.initial),
        components=dict(ledger.components),
        transfers=ledger.transfers + transfers,
        rulesets=ledger.rulesets + [table.ruleset],
    )
    if result.total() != ledger.total():
        raise TotalMismatch(f'规则集 {table.ruleset} 应用后电荷总和发生变化', {'ruleset': table.ruleset})
    logger.info(f'[Discharge] 规则集 {table.ruleset}: {len(transfers)} 笔转移')
    return result


def select_ruleset(g: PlaneGraph) -> str:
    """按最小度与 1-点、2-点个数选取证明中对应情形的规则集"""
    if not g.vertex_ids:
        return 'D'
    delta = g.min_degree
    ones = sum(1 for v in g.vertex_ids if g.degree(v) <= 1)
    twos = sum(1 for v in g.vertex_ids if g.degree(v) == 2)
    if delta >= 4:
        return 'D'
    if delta == 3:
        return 'R-case1'
    if delta == 2:
        return 'R-case2-variant' if twos <= 2 else 'R-case3'
    if ones >= 2:
        return 'R-case1'
    return 'R-case4-variant' if twos <= 2 else 'R-case3'


def scheme_for(ruleset: str) -> ChargeScheme:
    return SCHEME_A if RULESET_ALIASES.get(ruleset, ruleset) == 'D' else SCHEME_B


@dataclass(frozen=True)
class AuditEntry:
    element: Element
    final: Fraction
    allowance: Optional[str] = None
    bound: Optional[Fraction] = None

    def to_payload(self) -> dict:
        payload = {'element': str(self.element), 'final': str(self.final)}
        if self.allowance is not None:
            payload['allowance'] = self.allowance
            payload['bound'] = str(self.bound)
        return payload


@dataclass(frozen=True)
class ClusterBudget:
    vertex: int
    faces: tuple[int, ...]
    total: Fraction
    floor: Optional[Fraction]

    def to_payload(self) -> dict:
        return {
            'vertex': self.vertex,
            'faces': list(self.faces),
            'total': str(self.total),
            'floor': None if self.floor is None else str(self.floor),
        }


@dataclass
class AuditReport:
    exceptions: list[AuditEntry]
    unexplained: list[AuditEntry]
    scheme_total: Fraction
    clusters: list[ClusterBudget] = field(default_factory=list)

    @property
    def unexplained_deficit(self) -> Fraction:
        return sum((e.final for e in self.unexplained), Fraction(0))

    @property
    def exception_floor(self) -> Fraction:
        return sum((e.bound for e in self.exceptions), Fraction(0))

    @property
    def argument_contradiction(self) -> bool:
        # 所有负电荷都在例外预算内，而预算下界仍高于方案总和
        return not self.unexplained and self.exception_floor > self.scheme_total

    def to_payload(self) -> dict:
        return {
            'exceptions': [e.to_payload() for e in self.exceptions],
            'unexplained': [e.to_payload() for e in self.unexplained],
            'unexplained_deficit': str(self.unexplained_deficit),
            'exception_floor': str(self.exception_floor),
            'scheme_total': str(self.scheme_total),
            'argument_contradiction': self.argument_contradiction,
            'clusters': [c.to_payload() for c in self.clusters],
        }


def _allowance_for(el: Element, ctx: _RuleContext, allowances: frozenset[str]) -> tuple[Optional[str], Optional[Fraction]]:
    if el.kind == 'v':
        profile = ctx.vertices[el.id]
        if profile.kind == 'special-3' and 'special_3_vertex' in allowances:
            return 'special_3_vertex', Fraction(-1)
        if profile.kind == 'special-2' and 'special_2_vertex' in allowances:
            return 'special_2_vertex', Fraction(-4)
        if profile.degree == 1 and 'one_vertex' in allowances:
            return 'one_vertex', Fraction(-7)
        return None, None
    profile = ctx.faces[el.id]
    if profile.is_special and 'special_face' in allowances:
        if degree_vector_matches(profile.degree_vector, ['3', '3', '5+']):
            return 'special_face', Fraction(-2)
        return 'special_face', Fraction(-7, 3)
    return None, None


def audit_charges(ledger: ChargeLedger, allowances=ALLOWANCES) -> AuditReport:
    g = ledger.graph
    allowed = frozenset(allowances or ())
    unknown = allowed - set(ALLOWANCES)
    if unknown:
        raise InputError(f'未知的例外类别: {sorted(unknown)}', {'known': list(ALLOWANCES)})

    ctx = _RuleContext(g)
    final = ledger.final
    exceptions, unexplained = [], []
    for el in sorted(final):
        q = final[el]
        if q >= 0:
            continue
        name, bound = _allowance_for(el, ctx, allowed)
        if name is not None and q >= bound:
            exceptions.append(AuditEntry(el, q, name, bound))
        else:
            unexplained.append(AuditEntry(el, q))

    floor = CLUSTER_FLOORS.get(ledger.ruleset)
    clusters = []
    for v in g.vertex_ids:
        if g.degree(v) != 2:
            continue
        faces = tuple(fid for fid in g.incident_faces[v] if g.faces[fid].degree in (3, 4))
        total = final[vertex(v)] + sum((final[face(fid)] for fid in faces), Fraction(0))
        clusters.append(ClusterBudget(v, faces, total, floor))

    report = AuditReport(
        exceptions=exceptions,
        unexplained=unexplained,
        scheme_total=Fraction(ledger.scheme.expected_total * g.component_count),
        clusters=clusters,
    )
    if unexplained:
        logger.warning(f'[Discharge] {len(unexplained)} 个元素的负电荷无法由例外预算解释')
    return report


@dataclass
class DischargeSummary:
    """每个点送出的电荷：f_k^α(v) 与 n_3^α(v)"""

    gifts: dict[int, list[tuple[Element, int, Fraction]]]

    def f(self, k: int, alpha: Fraction, v: int) -> int:
        return sum(1 for el, size, q in self.gifts.get(v, ()) if el.kind == 'f' and size == k and q >= alpha)

    def n3(self, alpha: Fraction, v: int) -> int:
        return sum(1 for el, size, q in self.gifts.get(v, ()) if el.kind == 'v' and size == 3 and q >= alpha)

    def to_payload(self) -> dict:
        rows = []
        for v, gifts in sorted(self.gifts.items()):
            faces: dict[str, dict[str, int]] = {}
            threes: dict[str, int] = {}
            for el, size, q in gifts:
                if el.kind == 'f':
                    faces.setdefault(str(size), {})[str(q)] = self.f(size, q, v)
                elif size == 3:
                    threes[str(q)] = self.n3(q, v)
            rows.append({'vertex': v, 'f': faces, 'n3': threes})
        return {'vertices': rows}


def discharge_summary(ledger: ChargeLedger, g: Optional[PlaneGraph] = None) -> DischargeSummary:
    g = g or ledger.graph
    totals: dict[tuple[int, Element], Fraction] = defaultdict(Fraction)
    for t in ledger.transfers:
        if t.source.kind == 'v':
            totals[(t.source.id, t.sink)] += t.amount
    gifts: dict[int, list[tuple[Element, int, Fraction]]] = defaultdict(list)
    for (v, sink), q in sorted(totals.items()):
        size = g.faces[sink.id].degree if sink.kind == 'f' else g.degree(sink.id)
        gifts[v].append((sink, size, q))
    return DischargeSummary(dict(gifts))
