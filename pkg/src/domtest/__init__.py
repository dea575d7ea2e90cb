"""
domtest: 损失厌恶与不平等厌恶敏感的二元随机占优检验
"""

__version__ = "0.1.0"
