"""Report generation modules"""

from .report_generator import ReportGenerator, emit_results

__all__ = ["ReportGenerator", "emit_results"]
