#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
ArtifactWriter - 実験成果物の書き出し
- CSV データ（各CSVに plot_<name>.py を併置）
- metadata.yaml（実効設定・導出値・チェック結果）
- summary.txt（チェックごとの PASS / FAIL）
"""

import os
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
import yaml

from common.logger import ColorLogger

# JST
JST = timezone(timedelta(hours=9))

PLOT_TEMPLATE = '''#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""{title}"""

import os

import matplotlib.pyplot as plt
import pandas as pd

HERE = os.path.dirname(os.path.abspath(__file__))

frame = pd.read_csv(os.path.join(HERE, "{csv}"))
x = "{x}"
fig, ax = plt.subplots(figsize=(8, 5))
for column in {columns!r}:
    ax.plot(frame[x], frame[column], label=column)
ax.set_xlabel(x)
{scale}ax.legend()
ax.grid(True, which="both", alpha=0.3)
fig.tight_layout()
fig.savefig(os.path.join(HERE, "{png}"), dpi=150)
'''


@dataclass(frozen=True)
class CheckResult:
    """受け入れチェック1件"""
    name: str
    passed: bool
    detail: str = ""

    def format_line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}" + (f": {self.detail}" if self.detail else "")


def _plain(value: Any) -> Any:
    """YAML 出力用に numpy 型を組み込み型へ変換"""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


class ArtifactWriter:
    """実験1回分の出力ディレクトリ管理"""

    def __init__(self, out_dir: str, logger: Optional[ColorLogger] = None):
        self.out_dir = out_dir
        self.logger = logger or ColorLogger(quiet=True)
        self.files: List[str] = []
        os.makedirs(out_dir, exist_ok=True)

    def path(self, filename: str) -> str:
        return os.path.join(self.out_dir, filename)

    def write_csv(self, name: str, frame: pd.DataFrame, plot_columns: Optional[Sequence[str]] = None,
                  log_scale: bool = False, title: str = "") -> str:
        """<name>.csv と plot_<name>.py を書き出す"""
        csv_path = self.path(f"{name}.csv")
        frame.to_csv(csv_path, index=False, float_format='%.17g')
        self.files.append(csv_path)

        columns = list(plot_columns) if plot_columns is not None else list(frame.columns[1:])
        script = PLOT_TEMPLATE.format(
            title=title or name,
            csv=f"{name}.csv",
            x=frame.columns[0],
            columns=columns,
            scale="ax.set_yscale('log')\n" if log_scale else "",
            png=f"{name}.png",
        )
        plot_path = self.path(f"plot_{name}.py")
        with open(plot_path, 'w', encoding='utf-8') as f:
            f.write(script)
        self.files.append(plot_path)
        self.logger.print_status(f"📄 CSV保存: {csv_path}")
        return csv_path

    def write_text(self, filename: str, text: str) -> str:
        path = self.path(filename)
        with open(path, 'w', encoding='utf-8') as f:
            f.write(text if text.endswith("\n") else text + "\n")
        self.files.append(path)
        return path

    def write_metadata(self, experiment_id: str, config: Dict[str, Any], derived: Dict[str, Any],
                       checks: Sequence[CheckResult], notes: Sequence[str] = ()) -> str:
        """config: セクションはそのまま --config に渡せる"""
        metadata = {
            'experiment': experiment_id,
            'created_at': datetime.now(JST).strftime("%Y%m%d%H%M%S"),
            'config': _plain(config),
            'derived': _plain(derived),
            'checks': [{'name': c.name, 'passed': bool(c.passed), 'detail': c.detail} for c in checks],
            'notes': list(notes),
        }
        path = self.path("metadata.yaml")
        with open(path, 'w', encoding='utf-8') as f:
            yaml.safe_dump(metadata, f, sort_keys=False, allow_unicode=True, default_flow_style=None)
        self.files.append(path)
        self.logger.print_status(f"📄 メタデータ保存: {path}")
        return path

    def write_summary(self, experiment_id: str, checks: Sequence[CheckResult],
                      sections: Sequence[str] = (), notes: Sequence[str] = ()) -> str:
        passed = sum(1 for c in checks if c.passed)
        lines = [
            f"experiment: {experiment_id}",
            f"result: {'PASS' if passed == len(checks) else 'FAIL'} ({passed}/{len(checks)} checks)",
            "",
            "checks:",
        ]
        lines += [f"  {c.format_line()}" for c in checks]
        for section in sections:
            lines += ["", section]
        if notes:
            lines += ["", "notes:"] + [f"  - {note}" for note in notes]
        return self.write_text("summary.txt", "\n".join(lines))
