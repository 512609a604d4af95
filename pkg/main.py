from dify_plugin import Plugin, DifyPluginEnv

# 精确搜索可能较慢，超时比默认值放宽
plugin = Plugin(DifyPluginEnv(MAX_REQUEST_TIMEOUT=300))

if __name__ == '__main__':
    plugin.run()
