from collections.abc import Generator
from typing import Any, Dict
import logging
from dify_plugin import Tool
from dify_plugin.entities.tool import ToolInvokeMessage
from dify_plugin.config.logger_format import plugin_logger_handler

from equitable.errors import BadParams, EquitableError
from equitable.params import default_k, optional_int, require_graph
from equitable.pipeline import reduce_report
from equitable.serialize import SeedFormatter, graph_to_dot, json_safe
from equitable.settings import EngineSettings, _norm

logger = logging.getLogger(__name__)
logger.setLevel(logging.INFO)
logger.addHandler(plugin_logger_handler)

class FindReducibleSetTool(Tool):
    def _invoke(self, tool_parameters: Dict[str, Any]) -> Generator[ToolInvokeMessage]:
        """给定 order 时只做校验，否则先查构型目录再做种子搜索"""
        try:
            g = require_graph(tool_parameters)
            k = default_k(g, optional_int(tool_parameters, 'k'))
            settings = EngineSettings.from_parameters(tool_parameters)

            order = None
            text = _norm(tool_parameters.get('order'))
            if text is not None:
                try:
                    order = [int(x) for x in str(text).split(',') if x.strip()]
                except ValueError as e:
                    raise BadParams(f'order 必须是逗号分隔的顶点编号: {text!r}') from e

            report = reduce_report(g, k, order=order, settings=settings)
            found = report['reducible_set']
            logger.info(f'[Reduce] k={k}, 结果: {found["order"] if found else None}')
            if found is None:
                yield self.create_json_message({'success': True, 'message': '未找到可约集', 'data': json_safe(report)})
                return
            yield self.create_json_message({
                'success': True,
                'message': '可约集已通过校验' if report['passed'] else '给定顺序不满足可约条件',
                'data': json_safe(report),
            })
            yield self.create_blob_message(
                blob=graph_to_dot(g, SeedFormatter(found['order'])).encode('utf-8'),
                meta={'file_name': 'reducible_set.dot', 'mime_type': 'text/vnd.graphviz'},
            )
        except EquitableError as e:
            logger.error(f'[Reduce] 输入错误: {e}')
            yield self.create_json_message(e.to_payload())
        except Exception as e:
            logger.error(f'[Reduce] 异常: {str(e)}')
            yield self.create_json_message({'success': False, 'message': str(e) or '搜索失败', 'error': str(e)})
