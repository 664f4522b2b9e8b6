#!/usr/bin/env python3
"""tanhspec 启动脚本：python tanhspec.py <expand|eval|diff|ft|solve|basis> [选项]"""
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from src.main import main

if __name__ == "__main__":
    sys.exit(main())
