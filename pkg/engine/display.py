"""
Terminal rendering for verification runs and reports.
"""

from typing import TYPE_CHECKING, Dict, List, Sequence

if TYPE_CHECKING:
    from .verification import CheckResult

# Optional: colorama for cross-platform color support
try:
    from colorama import init, Fore, Style
    init(autoreset=True)
    HAS_COLOR = True
except ImportError:
    HAS_COLOR = False

    # Fallback stubs
    class Fore:
        RED = ""
        GREEN = ""
        YELLOW = ""
        CYAN = ""
        RESET = ""

    class Style:
        BRIGHT = ""
        DIM = ""
        RESET_ALL = ""


class Display:
    """Builds the strings main.py prints; nothing here writes to the terminal."""

    def __init__(self, width: int = 80, color: bool = True):
        self.width = width
        self.color = color and HAS_COLOR

    def _paint(self, text: str, color: str) -> str:
        if not self.color:
            return text
        return f"{color}{text}{Style.RESET_ALL}"

    def render_header(self, title: str, subtitle: str = "") -> str:
        inner = self.width - 4
        lines = ["+" + "=" * (self.width - 2) + "+",
                 f"| {title:<{inner}} |"]
        if subtitle:
            lines.append(f"| {subtitle:<{inner}} |")
        lines.append("+" + "=" * (self.width - 2) + "+")
        return "\n".join(lines)

    def render_check(self, result: "CheckResult") -> str:
        """One line: status, suite/name, residual against threshold."""
        tag = self._paint("[PASS]", Fore.GREEN) if result.passed else self._paint("[FAIL]", Fore.RED)
        name = f"{result.suite}/{result.name}"
        room = self.width - 40
        if len(name) > room:
            name = name[:room - 3] + "..."
        return f"  {tag} {name:<{room}} {result.residual:>10.3e} <= {result.threshold:.1e}"

    def render_results(self, results: Sequence["CheckResult"]) -> str:
        return "\n".join(self.render_check(r) for r in results)

    def render_summary(self, results: Sequence["CheckResult"]) -> str:
        failed = [r for r in results if not r.passed]
        by_suite: Dict[str, List[int]] = {}
        for r in results:
            counts = by_suite.setdefault(r.suite, [0, 0])
            counts[0 if r.passed else 1] += 1
        lines = ["  " + "-" * (self.width - 4)]
        for suite, (ok, bad) in by_suite.items():
            status = self._paint("ok", Fore.GREEN) if not bad else self._paint(f"{bad} failed", Fore.RED)
            lines.append(f"  {suite:<12} {ok + bad:>4} checks  {status}")
        total = f"  TOTAL: {len(results) - len(failed)}/{len(results)} passed"
        lines.append(self._paint(total, Fore.GREEN if not failed else Fore.RED))
        return "\n".join(lines)

    def render_error(self, message: str) -> str:
        return self._paint(f"error: {message}", Fore.RED)

    def render_written(self, path: str, what: str = "report") -> str:
        return f"  {self._paint('->', Fore.CYAN)} {what} written to {path}"
