from typing import Any

from dify_plugin import ToolProvider
from dify_plugin.errors.tool import ToolProviderCredentialValidationError

from equitable.configurations import load_catalog


class EquitableProvider(ToolProvider):

    def _validate_credentials(self, credentials: dict[str, Any]) -> None:
        # 不需要凭据，只确认随包的构型目录可以加载
        try:
            load_catalog()
        except Exception as e:
            raise ToolProviderCredentialValidationError(f'构型目录加载失败: {e}')
