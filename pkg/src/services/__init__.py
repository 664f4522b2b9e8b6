"""命令与函数来源"""
