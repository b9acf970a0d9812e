# Name:  exporter.py
# Purpose: Container of Exporter class writing CSV and JSON reports
# Authors:      bathpulse developers
# Created:      19.10.2026
# Licence:
# This file is part of bathpulse.
# bathpulse is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, version 3 of the License.
# http://www.gnu.org/licenses/gpl-3.0.html
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.
from __future__ import print_function, absolute_import, division

import os
import sys
import json
from collections import OrderedDict

import numpy as np

from bathpulse.utils import add_logger

OUTPUT_DIR_VARIABLE = 'BATHPULSE_OUTPUT_DIR'


def output_path(filename=None, default=None):
    """Resolve an output file name

    Bare file names (and `default` when `filename` is None) are placed in
    the directory given by the BATHPULSE_OUTPUT_DIR environment variable,
    or in the current directory when it is not set.

    """
    if filename is None:
        filename = default
    if filename is None or filename == '-':
        return filename
    if os.path.dirname(filename) == '':
        directory = os.getenv(OUTPUT_DIR_VARIABLE)
        if directory:
            if not os.path.exists(directory):
                os.makedirs(directory)
            filename = os.path.join(directory, filename)
    return filename


class Exporter(object):
    """Writer of tabular reports (rows of named columns) as CSV or JSON

    CSV keeps full double precision ('%.17g'); summary values are
    appended as '# key=value' trailer lines. JSON holds the metadata,
    the rows as objects and the summary.

    Parameters
    ----------
    fmt : str
        'csv' or 'json'

    """
    DEFAULT_SOURCE = 'bathpulse'
    FORMATS = ('csv', 'json')
    FLOAT_FORMAT = '%.17g'

    def __init__(self, fmt='csv', log_level=None):
        if fmt not in self.FORMATS:
            raise ValueError('Unknown report format %r, use one of %s' % (fmt, self.FORMATS))
        self.fmt = fmt
        self.logger = add_logger('bathpulse', log_level)

    def export(self, filename, columns, rows, summary=None, metadata=None):
        """Write the report

        Parameters
        ----------
        filename : str or None
            output file; None or '-' writes to standard output
        columns : list of str
        rows : list of sequences
            one value per column
        summary : dict
            scalar results of the whole table (e.g. fitted slope)
        metadata : dict
            extra global metadata

        Returns
        -------
        filename : str or None

        """
        global_metadata = self._set_global_metadata(metadata or {})
        if filename in (None, '-'):
            self._write(sys.stdout, columns, rows, summary, global_metadata)
        else:
            with open(filename, 'w') as fobj:
                self._write(fobj, columns, rows, summary, global_metadata)
            self.logger.info('Report written to %s', filename)
        return filename

    def _write(self, fobj, columns, rows, summary, metadata):
        if self.fmt == 'json':
            self._write_json(fobj, columns, rows, summary, metadata)
        else:
            self._write_csv(fobj, columns, rows, summary)

    def _write_json(self, fobj, columns, rows, summary, metadata):
        data = OrderedDict(metadata)
        data['rows'] = [OrderedDict((c, self._plain(v)) for c, v in zip(columns, row))
                        for row in rows]
        if summary:
            data['summary'] = OrderedDict((k, self._plain(v)) for k, v in summary.items())
        json.dump(data, fobj, indent=2)
        fobj.write('\n')

    def _write_csv(self, fobj, columns, rows, summary):
        fobj.write(','.join(columns) + '\n')
        if len(rows) > 0:
            fmt = [self._column_format(v) for v in rows[0]]
            table = np.array([list(row) for row in rows], dtype=object)
            np.savetxt(fobj, table, fmt=fmt, delimiter=',')
        for key, value in (summary or {}).items():
            fobj.write('# %s=%s\n' % (key, self._text(value)))

    @classmethod
    def _column_format(cls, value):
        if isinstance(value, (bool, np.bool_)):
            return '%d'
        if isinstance(value, (int, np.integer)):
            return '%d'
        if isinstance(value, (float, np.floating)):
            return cls.FLOAT_FORMAT
        return '%s'

    @classmethod
    def _text(cls, value):
        if isinstance(value, (float, np.floating)):
            return cls.FLOAT_FORMAT % value
        if isinstance(value, (list, tuple, np.ndarray)):
            return ';'.join(cls._text(v) for v in value)
        return str(value)

    @staticmethod
    def _plain(value):
        """Convert numpy scalars and arrays to JSON compatible values"""
        if isinstance(value, np.ndarray):
            return value.tolist()
        if isinstance(value, np.bool_):
            return bool(value)
        if isinstance(value, np.integer):
            return int(value)
        if isinstance(value, np.floating):
            value = float(value)
        if isinstance(value, float) and not np.isfinite(value):
            return None
        return value

    @staticmethod
    def _set_global_metadata(metadata):
        # no timestamps, identical runs give identical files
        global_metadata = OrderedDict([('source', Exporter.DEFAULT_SOURCE)])
        global_metadata.update(metadata)
        return global_metadata
