"""tanhspec - tanh-Jacobi 正交基上的谱逼近工具"""
__version__ = "1.0.0"
