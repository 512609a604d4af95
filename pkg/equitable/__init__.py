"""平面图（无弦 4-圈与 6-圈）均匀着色工具库。

包内模块对应插件的各个工具：
    plane_graph   平面图数据模型与面追踪
    structure     弦圈检测、类成员判定、面/点分类
    degeneracy    退化度与最小者最后消去序
    discharging   精确有理数放电规则引擎
    configurations 构型匹配、可约集验证与搜索
    coloring      均匀着色与均匀列表着色
    fixtures      测试图生成器与语料库
"""
import logging

from dify_plugin.config.logger_format import plugin_logger_handler

# 统一把库日志接到插件日志处理器上
logger = logging.getLogger(__name__)
logger.setLevel(logging.INFO)
logger.addHandler(plugin_logger_handler)

__version__ = '0.1.0'
