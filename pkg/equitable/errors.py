from typing import Any, Optional


class EquitableError(Exception):
    """库内所有错误的基类，带稳定的机器可读错误码"""

    code = 'equitable_error'
    exit_code = 2

    def __init__(self, message: str, details: Optional[dict[str, Any]] = None):
        super().__init__(message)
        self.details = details or {}

    def to_payload(self) -> dict[str, Any]:
        return {
            'success': False,
            'message': str(self),
            'error': str(self),
            'code': self.code,
            'details': self.details,
        }


class InputError(EquitableError):
    code = 'input_error'


class NonSymmetricAdjacency(InputError):
    code = 'non_symmetric_adjacency'


class DuplicateNeighbor(InputError):
    code = 'duplicate_neighbor'


class SelfLoop(InputError):
    code = 'self_loop'


class EulerViolation(InputError):
    code = 'euler_violation'


class UnsupportedLength(InputError):
    code = 'unsupported_length'


class TotalMismatch(EquitableError):
    code = 'total_mismatch'
    exit_code = 1


class AmbiguousRule(EquitableError):
    code = 'ambiguous_rule'


class MalformedPattern(InputError):
    code = 'malformed_pattern'


class DegreeBelowShownEdges(MalformedPattern):
    code = 'degree_below_shown_edges'


class WrongSize(InputError):
    code = 'wrong_size'


class DuplicateVertex(InputError):
    code = 'duplicate_vertex'


class GraphTooSmall(InputError):
    code = 'graph_too_small'


class SizeLimit(EquitableError):
    code = 'size_limit'


class PreconditionViolated(EquitableError):
    code = 'precondition_violated'
    exit_code = 1


class NotUniform(InputError):
    code = 'not_uniform'


class BadParams(InputError):
    code = 'bad_params'


class FixtureMismatch(EquitableError):
    code = 'fixture_mismatch'
    exit_code = 1


class PreconditionNotChecked:
    """警告级别：前置条件未经确认，但仍继续计算"""

    code = 'precondition_not_checked'

    def __init__(self, message: str):
        self.message = message

    def __repr__(self) -> str:
        return f'PreconditionNotChecked({self.message!r})'

    def to_payload(self) -> dict[str, Any]:
        return {'code': self.code, 'message': self.message}
