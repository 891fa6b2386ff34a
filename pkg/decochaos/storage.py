# -*- coding: utf-8 -*-
"""
Files produced by runs: moment tables, snapshot files, contour tables
and the run directory that ties them together.
"""
from __future__ import unicode_literals
from __future__ import print_function

import errno
import hashlib
import io
import json
import logging
import math
import os
from collections import OrderedDict

import numpy as np

from decochaos.__version__ import __version__
from decochaos.analysis.moments import MomentRecord
from decochaos.config import write_config
from decochaos.constants import (
    SNAPSHOT_MAGIC, SNAPSHOT_FORMAT_VERSION, FORMAT_BINARY, FORMAT_CONTOUR,
    TRACE
)
from decochaos.errors import OutputError, SnapshotFormatError, ValidationError
from decochaos.evolve.results import RunSink
from decochaos.grid import build_axis, PhaseField

logger = logging.getLogger('decochaos.storage')

PAYLOAD_DTYPE = np.dtype('<f8')
HEADER_END = b'end\n'
MANIFEST_NAME = 'manifest.txt'


# ---- Moment tables ----

def _format_cell(value):
    if value is None:
        return ''
    if isinstance(value, int):
        return '%d' % value
    return '%.17g' % value


def format_moment_row(record):
    return ','.join(_format_cell(v) for v in record.as_row())


def moments_header():
    return ','.join(MomentRecord.COLUMNS)


def write_moments(records, path):
    """ Writes a full moment table. """
    try:
        with io.open(path, 'w', encoding='utf-8', newline='\n') as stream:
            stream.write(moments_header() + '\n')
            for record in records:
                stream.write(format_moment_row(record) + '\n')
    except (IOError, OSError) as exc:
        raise OutputError("cannot write %s: %s" % (path, exc))
    logger.debug("wrote %d moment records to %s", len(records), path)


def read_moments(path):
    """ Reads a table written by `write_moments`. """
    records = []
    with io.open(path, 'r', encoding='utf-8') as stream:
        header = stream.readline().strip()
        if header != moments_header():
            raise ValidationError(
                "%s does not start with the moment table header" % path)
        for line in stream:
            line = line.strip()
            if not line:
                continue
            cells = line.split(',')
            row = [float(cell) for cell in cells[:-1]]
            row.append(int(cells[-1]) if cells[-1] else None)
            records.append(MomentRecord.from_row(row))
    return records


# ---- Snapshot files ----

def _render_header(entries):
    lines = ['# %s' % SNAPSHOT_MAGIC]
    for key, value in entries.items():
        lines.append('%s = %s' % (key, value))
    return ('\n'.join(lines) + '\n').encode('ascii') + HEADER_END


def snapshot_bytes(field, backend=None, hbar=None, config_digest=None):
    """
    Encodes a field as a snapshot file: a text header followed by the
    values as little-endian doubles in row-major (x, p) order.
    """
    payload = np.ascontiguousarray(
        field.values, dtype=PAYLOAD_DTYPE).tobytes(order='C')
    entries = OrderedDict((
        ('format_version', SNAPSHOT_FORMAT_VERSION),
        ('version', __version__),
        ('backend', backend or 'unknown'),
        ('time', repr(float(field.time))),
        ('hbar', 'none' if hbar is None else repr(float(hbar))),
        ('x.min', repr(field.x_axis.minimum)),
        ('x.max', repr(field.x_axis.maximum)),
        ('x.count', field.x_axis.count),
        ('p.min', repr(field.p_axis.minimum)),
        ('p.max', repr(field.p_axis.maximum)),
        ('p.count', field.p_axis.count),
        ('config_digest', config_digest or 'none'),
        ('payload_bytes', len(payload)),
        ('payload_sha256', hashlib.sha256(payload).hexdigest()),
    ))
    return _render_header(entries) + payload


def write_snapshot(field, path, backend=None, hbar=None, config_digest=None):
    data = snapshot_bytes(field, backend, hbar, config_digest)
    try:
        with io.open(path, 'wb') as stream:
            stream.write(data)
    except (IOError, OSError) as exc:
        raise OutputError("cannot write %s: %s" % (path, exc))
    logger.debug("snapshot at t=%r written to %s", field.time, path)
    return path


class Snapshot(object):
    """
    A snapshot file read back.

    Attributes:
        field (PhaseField):
            The values on their grid.
        header (OrderedDict):
            Every header entry as text.
    """
    def __init__(self, field, header):
        """ Constructor. """
        super(Snapshot, self).__init__()
        self.field = field
        self.header = header

    def __repr__(self):
        return 'Snapshot(backend=%r, time=%r, shape=%r)' % (
            self.backend, self.field.time, self.field.shape)

    @property
    def backend(self):
        return self.header.get('backend')

    @property
    def hbar(self):
        value = self.header.get('hbar', 'none')
        return None if value == 'none' else float(value)

    @property
    def config_digest(self):
        value = self.header.get('config_digest', 'none')
        return None if value == 'none' else value


def parse_snapshot(data, source='<bytes>'):
    """ Decodes snapshot bytes; every inconsistency is an error. """
    end = data.find(b'\n' + HEADER_END)
    if not data.startswith(('# %s\n' % SNAPSHOT_MAGIC).encode('ascii')) \
            or end < 0:
        raise SnapshotFormatError("%s is not a snapshot file" % source)
    header_text = data[:end].decode('ascii')
    payload = data[end + 1 + len(HEADER_END):]
    header = OrderedDict()
    for line in header_text.splitlines()[1:]:
        if '=' not in line:
            raise SnapshotFormatError(
                "%s: malformed header line %r" % (source, line))
        key, value = [part.strip() for part in line.split('=', 1)]
        header[key] = value
    try:
        version = int(header['format_version'])
        expected_bytes = int(header['payload_bytes'])
        checksum = header['payload_sha256']
        x_axis = build_axis(float(header['x.min']), float(header['x.max']),
                            int(header['x.count']))
        p_axis = build_axis(float(header['p.min']), float(header['p.max']),
                            int(header['p.count']))
        time = float(header['time'])
    except (KeyError, ValueError, ValidationError) as exc:
        raise SnapshotFormatError("%s: bad header (%s)" % (source, exc))
    if version != SNAPSHOT_FORMAT_VERSION:
        raise SnapshotFormatError(
            "%s: format version %r is not supported" % (source, version))
    if len(payload) != expected_bytes or \
            expected_bytes != x_axis.count * p_axis.count * PAYLOAD_DTYPE.itemsize:
        raise SnapshotFormatError(
            "%s: payload has %d bytes, header says %d for a %dx%d grid" % (
                source, len(payload), expected_bytes,
                x_axis.count, p_axis.count))
    if hashlib.sha256(payload).hexdigest() != checksum:
        raise SnapshotFormatError("%s: payload checksum mismatch" % source)
    values = np.frombuffer(payload, dtype=PAYLOAD_DTYPE).reshape(
        (x_axis.count, p_axis.count)).astype(np.float64)
    return Snapshot(PhaseField(x_axis, p_axis, values, time=time), header)


def read_snapshot(path):
    with io.open(path, 'rb') as stream:
        data = stream.read()
    return parse_snapshot(data, source=path)


# ---- Contour tables ----

def reference_box(hbar, center=(0.0, 0.0)):
    """ Corners of a square of area `4 hbar` centered on `center`. """
    half = math.sqrt(hbar)
    cx, cp = center
    return (cx - half, cp - half), (cx + half, cp + half)


def contour_text(field, hbar=None, backend=None):
    """
    A gnuplot style `x p f` table, one block per x node separated by a
    blank line.
    """
    lines = ['# decochaos contour table']
    lines.append('# backend = %s' % (backend or 'unknown'))
    lines.append('# time = %r' % float(field.time))
    lines.append('# grid = %s x %s' % (field.x_axis, field.p_axis))
    if hbar is not None:
        center = (0.5 * (field.x_axis.minimum + field.x_axis.maximum),
                  0.5 * (field.p_axis.minimum + field.p_axis.maximum))
        (x0, p0), (x1, p1) = reference_box(hbar, center)
        lines.append('# reference box area = %r' % (4.0 * hbar))
        lines.append('# reference box = %r %r %r %r' % (x0, p0, x1, p1))
    lines.append('# columns: x p f')
    p_nodes = field.p_axis.nodes
    for i, x in enumerate(field.x_axis.nodes):
        row = field.values[i]
        for j, p in enumerate(p_nodes):
            lines.append('%.17g %.17g %.17g' % (x, p, row[j]))
        lines.append('')
    return '\n'.join(lines) + '\n'


def export_snapshot(field, path, fmt=FORMAT_BINARY, backend=None, hbar=None,
                    config_digest=None):
    """ Writes a field in one of the export formats. """
    if fmt == FORMAT_BINARY:
        return write_snapshot(field, path, backend, hbar, config_digest)
    elif fmt == FORMAT_CONTOUR:
        text = contour_text(field, hbar=hbar, backend=backend)
        try:
            with io.open(path, 'w', encoding='utf-8', newline='\n') as stream:
                stream.write(text)
        except (IOError, OSError) as exc:
            raise OutputError("cannot write %s: %s" % (path, exc))
        logger.debug("contour table written to %s", path)
        return path
    raise ValidationError("unknown export format %r" % (fmt,))


# ---- Run directories ----

def sha256_file(path):
    digest = hashlib.sha256()
    with io.open(path, 'rb') as stream:
        for chunk in iter(lambda: stream.read(1 << 16), b''):
            digest.update(chunk)
    return digest.hexdigest()


def snapshot_name(backend, step):
    return 'snapshot-%s-%08d.bin' % (backend, step)


class RunDirectory(RunSink):
    """
    Output directory of a run.

    Moment rows are appended to `moments-<backend>.csv` as they arrive,
    snapshots go to `snapshot-<backend>-<step>.bin`. `close` writes
    `manifest.txt` with the checksum of every file.

    Attributes:
        path (str):
            The directory.
        config (RunConfig):
            Written to `config.txt`; its digest goes in snapshot headers.
        files (list):
            Names of the files written so far.
    """
    def __init__(self, path, config=None):
        """ Constructor. """
        super(RunDirectory, self).__init__()
        self.path = path
        self.config = config
        self.files = []
        self.streams = OrderedDict()
        try:
            os.makedirs(path)
        except OSError as exc:
            if exc.errno != errno.EEXIST or not os.path.isdir(path):
                raise OutputError("cannot create %s: %s" % (path, exc))
        if not os.access(path, os.W_OK):
            raise OutputError("%s is not writable" % path)
        if config is not None:
            write_config(config, self._track('config.txt'))

    def __repr__(self):
        return 'RunDirectory(%r, files=%d)' % (self.path, len(self.files))

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.close()

    def _track(self, name):
        if name not in self.files:
            self.files.append(name)
        return os.path.join(self.path, name)

    def file_path(self, name):
        return os.path.join(self.path, name)

    def record(self, backend, record):
        stream = self.streams.get(backend)
        if stream is None:
            name = 'moments-%s.csv' % backend
            try:
                stream = io.open(self._track(name), 'w', encoding='utf-8',
                                 newline='\n')
            except (IOError, OSError) as exc:
                raise OutputError("cannot write %s: %s" % (name, exc))
            stream.write(moments_header() + '\n')
            self.streams[backend] = stream
        stream.write(format_moment_row(record) + '\n')

    def snapshot(self, backend, step, field):
        hbar = digest = None
        if self.config is not None:
            hbar = self.config.hbar
            digest = self.config.digest()
        write_snapshot(field, self._track(snapshot_name(backend, step)),
                       backend=backend, hbar=hbar, config_digest=digest)

    def write_text(self, name, text):
        try:
            with io.open(self._track(name), 'w', encoding='utf-8',
                         newline='\n') as stream:
                stream.write(text)
        except (IOError, OSError) as exc:
            raise OutputError("cannot write %s: %s" % (name, exc))
        logger.log(TRACE, "wrote %s", name)

    def write_report(self, report, name='report.txt'):
        self.write_text(name, report.render())

    def write_failure(self, error, exit_code, backend=None):
        """ Machine readable record of an aborted run. """
        record = OrderedDict((
            ('exit_code', exit_code),
            ('error', type(error).__name__),
            ('message', str(error)),
            ('backend', backend),
            ('step', getattr(error, 'step', None)),
            ('time', getattr(error, 'time', None)),
            ('version', __version__),
        ))
        self.write_text('failure.json', json.dumps(record, indent=2) + '\n')
        logger.info("failure record written to %s", self.path)

    def flush(self):
        for stream in self.streams.values():
            stream.flush()

    def close(self):
        """ Closes the moment tables and writes the manifest. """
        for stream in self.streams.values():
            stream.close()
        self.streams.clear()
        lines = ['# decochaos run manifest', 'version = %s' % __version__]
        for name in sorted(os.listdir(self.path)):
            full = os.path.join(self.path, name)
            if name != MANIFEST_NAME and os.path.isfile(full):
                lines.append('%s  %s' % (sha256_file(full), name))
        with io.open(os.path.join(self.path, MANIFEST_NAME), 'w',
                     encoding='utf-8', newline='\n') as stream:
            stream.write('\n'.join(lines) + '\n')
        logger.debug("run directory %s closed with %d files",
                     self.path, len(self.files))
