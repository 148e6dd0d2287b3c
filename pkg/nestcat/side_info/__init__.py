from .problems import CCSIProblem, SCSIProblem, ccsi_problem, run_trial, scsi_problem

__all__ = ["CCSIProblem", "SCSIProblem", "ccsi_problem", "run_trial", "scsi_problem"]
