from collections.abc import Generator
from typing import Any, Dict
import logging
from dify_plugin import Tool
from dify_plugin.entities.tool import ToolInvokeMessage
from dify_plugin.config.logger_format import plugin_logger_handler

from equitable.pipeline import corpus_report
from equitable.serialize import json_safe
from equitable.settings import EngineSettings

logger = logging.getLogger(__name__)
logger.setLevel(logging.INFO)
logger.addHandler(plugin_logger_handler)

class CorpusRunTool(Tool):
    def _invoke(self, tool_parameters: Dict[str, Any]) -> Generator[ToolInvokeMessage]:
        """对内置语料库逐个复核性质、可约集与着色"""
        try:
            settings = EngineSettings.from_parameters(tool_parameters)
            report = corpus_report(settings=settings)
            logger.info(f'[Corpus] 共 {report["count"]} 个测试图, 失败 {len(report["failed"])} 个')
            message = '全部通过' if report['passed'] else f'失败: {", ".join(report["failed"])}'
            yield self.create_json_message({'success': True, 'message': message, 'data': json_safe(report)})
        except Exception as e:
            logger.error(f'[Corpus] 异常: {str(e)}')
            yield self.create_json_message({'success': False, 'message': str(e) or '运行失败', 'error': str(e)})
