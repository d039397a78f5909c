"""
Services module for pnlab
"""

from .verification_service import verification_service, VerificationService
from .report_service import report_service, ReportService

__all__ = [
    'verification_service',
    'VerificationService',
    'report_service',
    'ReportService',
]
