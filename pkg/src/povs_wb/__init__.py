"""povs_wb: exact-arithmetic workbench for pre-ordered vector spaces.

The convenient entry points:

    from povs_wb import povs, opmaps, seqspace
    from povs_wb.workbench import run, run_search
    from povs_wb.service import create_app
"""

__version__ = "0.1.0"
