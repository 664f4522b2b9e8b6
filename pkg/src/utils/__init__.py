"""工具模块"""

