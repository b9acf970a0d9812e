# Name:         warnings.py
# Purpose:      Definitions of bathpulse warnings
# Authors:      bathpulse developers
# Licence:      This file is part of bathpulse. You can redistribute it or modify
#               under the terms of GNU General Public License, v.3
#               http://www.gnu.org/licenses/gpl-3.0.html

class FloorContaminationWarning(UserWarning):
    pass
