from collections.abc import Generator
from typing import Any, Dict
import logging
from dify_plugin import Tool
from dify_plugin.entities.tool import ToolInvokeMessage
from dify_plugin.config.logger_format import plugin_logger_handler

from equitable.errors import EquitableError
from equitable.params import default_k, flag, optional_int, optional_json, require_graph
from equitable.pipeline import list_color_report, random_list_payload
from equitable.serialize import json_safe
from equitable.settings import EngineSettings, _norm

logger = logging.getLogger(__name__)
logger.setLevel(logging.INFO)
logger.addHandler(plugin_logger_handler)

class ListColorTool(Tool):
    def _invoke(self, tool_parameters: Dict[str, Any]) -> Generator[ToolInvokeMessage]:
        """均匀列表着色；未提供 lists 时按 seed 随机生成 k 元列表"""
        try:
            g = require_graph(tool_parameters)
            settings = EngineSettings.from_parameters(tool_parameters)
            mode = _norm(tool_parameters.get('mode')) or 'constructive'
            force = flag(tool_parameters, 'force')

            lists = optional_json(tool_parameters, 'lists')
            if lists is None:
                k = default_k(g, optional_int(tool_parameters, 'k'))
                seed = optional_int(tool_parameters, 'seed')
                seed = settings.default_seed if seed is None else seed
                lists = random_list_payload(g, k, seed, settings.list_palette_factor)
                logger.info(f'[ListColor] 随机生成 {k} 元列表, seed={seed}')

            report = list_color_report(g, lists, mode, force, settings)
            report['lists'] = lists
            yield self.create_json_message({
                'success': True,
                'message': '列表着色已通过校验' if report['passed'] else '未找到合法的列表着色',
                'data': json_safe(report),
            })
        except EquitableError as e:
            logger.error(f'[ListColor] 输入错误: {e}')
            yield self.create_json_message(e.to_payload())
        except Exception as e:
            logger.error(f'[ListColor] 异常: {str(e)}')
            yield self.create_json_message({'success': False, 'message': str(e) or '着色失败', 'error': str(e)})
