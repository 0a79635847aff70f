# -*- coding: utf-8 -*-
"""
RMRPA Test Suite
================

测试套件用于验证RMRPA系统的各项功能，包括：
- Reed-Muller 编码、投影与 Reed 多数译码 (test_rm_core.py)
- 信道模型与 LLR (test_channels.py)
- 快速 Hadamard 变换与一阶 ML 译码 (test_fht.py)
- RPA 译码器与不变性 (test_rpa.py)
- Chase 列表译码与外码级联 (test_list_concat.py)
- Monte-Carlo 仿真、CSV 与过渡宽度 (test_sim_harness.py)
- 译码器注册表与统一接口 (test_decoders.py)
- 命令行入口 (test_main.py)
- 配置、数据模型与日志 (test_basic_functionality.py)

运行测试：
    python -m pytest tests/
    python -m pytest tests/ -m "not slow"
    python tests/run_tests.py
"""

import os
import sys

# 确保测试可以导入项目模块
TEST_DIR = os.path.dirname(os.path.abspath(__file__))
PROJECT_ROOT = os.path.dirname(TEST_DIR)

if PROJECT_ROOT not in sys.path:
    sys.path.insert(0, PROJECT_ROOT)

__version__ = "1.0.0"
__author__ = "RMRPA Development Team"
