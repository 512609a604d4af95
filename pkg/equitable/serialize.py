from collections.abc import Mapping
from fractions import Fraction
from typing import Any, Optional
import json

from equitable.plane_graph import Adjacency, PlaneGraph, as_adjacency

# graphviz 的 /set19 配色，超出时循环
PALETTE = (
    '#e41a1c', '#377eb8', '#4daf4a', '#984ea3', '#ff7f00',
    '#ffff33', '#a65628', '#f781bf', '#999999',
)


def _default(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (set, frozenset, tuple)):
        return list(value)
    raise TypeError(f'无法序列化的类型: {type(value).__name__}')


def dumps(payload: Any) -> str:
    return json.dumps(payload, indent=2, default=_default) + '\n'


class Formatter:
    """子类覆盖这些方法即可给图、点和边加属性"""

    def graph_lines(self) -> list[str]:
        return []

    def vertex_attributes(self, v: int) -> Optional[list[str]]:
        return None

    def edge_attributes(self, u: int, v: int) -> Optional[list[str]]:
        return None


class ColoringFormatter(Formatter):
    def __init__(self, coloring: Mapping[int, int]):
        self.coloring = {int(v): int(c) for v, c in coloring.items()}

    def vertex_attributes(self, v: int) -> Optional[list[str]]:
        c = self.coloring.get(v)
        if c is None:
            return None
        fill = PALETTE[(c - 1) % len(PALETTE)]
        return ['style=filled', f'fillcolor="{fill}"', f'label="{v}:{c}"']


class SeedFormatter(Formatter):
    def __init__(self, vertices):
        self.index = {v: i + 1 for i, v in enumerate(vertices)}

    def vertex_attributes(self, v: int) -> Optional[list[str]]:
        if v not in self.index:
            return None
        return ['shape=doublecircle', f'xlabel="x{self.index[v]}"']


SPECIAL_FACE_STYLE = ('color="#e41a1c"', 'penwidth=2.5')
BAD_FACE_STYLE = ('color="#377eb8"', 'penwidth=2.5', 'style=dashed')


class FaceFormatter(Formatter):
    """按面分类描边：特殊 3-面实线红，坏 4-面虚线蓝，两者共边时特殊优先"""

    def __init__(self, g: PlaneGraph, profiles):
        self.special: set[frozenset[int]] = set()
        self.bad: set[frozenset[int]] = set()
        for p in profiles:
            if not (p.is_special or p.is_bad):
                continue
            walk = g.faces[p.face].walk_vertices
            edges = {frozenset((walk[i], walk[(i + 1) % len(walk)])) for i in range(len(walk))}
            (self.special if p.is_special else self.bad).update(edges)

    def graph_lines(self) -> list[str]:
        return [
            '    subgraph cluster_legend {',
            '        label="faces";',
            '        legend_special [shape=plaintext,label="special 3-face"];',
            '        legend_bad [shape=plaintext,label="bad 4-face"];',
            '        legend_special -- legend_bad [%s];' % ','.join(SPECIAL_FACE_STYLE),
            '        legend_bad -- legend_special [%s];' % ','.join(BAD_FACE_STYLE),
            '    }',
        ]

    def edge_attributes(self, u: int, v: int) -> Optional[list[str]]:
        edge = frozenset((u, v))
        if edge in self.special:
            return list(SPECIAL_FACE_STYLE)
        if edge in self.bad:
            return list(BAD_FACE_STYLE)
        return None


def graph_to_dot(g, formatter: Formatter = Formatter(), name: str = 'G') -> str:
    adjacency: Adjacency = as_adjacency(g)
    result = [f'graph {name} {{', '    splines=true;', '    overlap=scalexy;']
    result.extend(formatter.graph_lines())
    for v in sorted(adjacency):
        line = f'    {v}'
        attrs = formatter.vertex_attributes(v)
        if attrs:
            line += ' [%s]' % ','.join(attrs)
        result.append(line)
    for u in sorted(adjacency):
        for v in sorted(adjacency[u]):
            if u >= v:
                continue
            line = f'    {u} -- {v}'
            attrs = formatter.edge_attributes(u, v)
            if attrs:
                line += ' [%s]' % ','.join(attrs)
            result.append(line)
    result.append('}')
    return '\n'.join(result) + '\n'


def coloring_to_dot(g, coloring: Mapping[int, int]) -> str:
    return graph_to_dot(g, ColoringFormatter(coloring))


def describe(g: PlaneGraph) -> dict:
    return {'n': g.order, 'm': g.size, 'faces': len(g.faces), 'components': g.component_count}


def json_safe(payload: Any) -> Any:
    """插件消息只接受原生 JSON 类型，分数等先转成字符串"""
    return json.loads(json.dumps(payload, default=_default))
