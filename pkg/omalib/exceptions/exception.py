"""
Combining exception classes in one place facilitates error handling.
Every error raised by omalib derives from OmaError, so a caller running
several analysis stages can catch a failing stage and carry on.
"""


class OmaError(Exception):
    """
    Base class of all omalib errors.
    """


class ArgsError(OmaError):  # pylint: disable=missing-class-docstring
    def __init__(self, argument_name: str, add: str | None = None):
        super().__init__(argument_name, add)
        self.argument_name = argument_name
        self.add = add

    def __str__(self):
        __base_text = (
            'There is a problem with the argument.\n'
            f'args: {self.argument_name}'
        )
        if self.add:
            return (
                f'{__base_text}\n'
                f'note: {self.add}'
            )
        return __base_text


class FilePathDoesNotExists(OmaError):  # pylint: disable=missing-class-docstring
    def __init__(self, file_path: str):
        super().__init__(file_path)
        self.file_path = file_path

    def __str__(self):
        return f'{self.file_path} does not exists.'


class FilePathIsNotFile(OmaError):  # pylint: disable=missing-class-docstring
    def __init__(self, file_path: str):
        super().__init__(file_path)
        self.file_path = file_path

    def __str__(self):
        return f'{self.file_path} is not file path.'


class MissingSidecar(OmaError):  # pylint: disable=missing-class-docstring
    def __init__(self, data_path: str, sidecar_path: str):
        super().__init__(data_path, sidecar_path)
        self.data_path = data_path
        self.sidecar_path = sidecar_path

    def __str__(self):
        return (
            f'{self.data_path} has no metadata sidecar.\n'
            f'expected: {self.sidecar_path}'
        )


class InvalidSidecar(OmaError):  # pylint: disable=missing-class-docstring
    def __init__(self, sidecar_path: str, field: str, reason: str):
        super().__init__(sidecar_path, field, reason)
        self.sidecar_path = sidecar_path
        self.field = field
        self.reason = reason

    def __str__(self):
        return (
            f'{self.sidecar_path} cannot be read.\n'
            f'field: {self.field}\n'
            f'note: {self.reason}'
        )


class UnwritablePath(OmaError):  # pylint: disable=missing-class-docstring
    def __init__(self, file_path: str, reason: str | None = None):
        super().__init__(file_path, reason)
        self.file_path = file_path
        self.reason = reason

    def __str__(self):
        if self.reason:
            return f'{self.file_path} cannot be written. ({self.reason})'
        return f'{self.file_path} cannot be written.'


class InvalidRate(OmaError):  # pylint: disable=missing-class-docstring
    def __init__(self, sample_rate: float):
        super().__init__(sample_rate)
        self.sample_rate = sample_rate

    def __str__(self):
        return f'sample rate must be positive, got {self.sample_rate} Hz.'


class NonFiniteSample(OmaError):  # pylint: disable=missing-class-docstring
    def __init__(self, row: int, column: int):
        super().__init__(row, column)
        self.row = row
        self.column = column

    def __str__(self):
        return (
            'Samples must be finite.\n'
            f'first offending sample: row {self.row}, column {self.column}'
        )


class RaggedRows(OmaError):  # pylint: disable=missing-class-docstring
    def __init__(self, file_path: str, line_number: int, expected: int, found: int):
        super().__init__(file_path, line_number, expected, found)
        self.file_path = file_path
        self.line_number = line_number
        self.expected = expected
        self.found = found

    def __str__(self):
        return (
            f'{self.file_path} line {self.line_number} has {self.found} '
            f'columns, expected {self.expected}.'
        )


class UnitKindMismatch(OmaError):  # pylint: disable=missing-class-docstring
    def __init__(self, channel_id: str, kind: str, unit: str):
        super().__init__(channel_id, kind, unit)
        self.channel_id = channel_id
        self.kind = kind
        self.unit = unit

    def __str__(self):
        return (
            f'channel {self.channel_id}: unit "{self.unit}" does not '
            f'match kind "{self.kind}".'
        )


class RecordTooShort(OmaError):  # pylint: disable=missing-class-docstring
    def __init__(self, n_samples: int, required: int):
        super().__init__(n_samples, required)
        self.n_samples = n_samples
        self.required = required

    def __str__(self):
        return (
            f'record holds {self.n_samples} samples, '
            f'at least {self.required} are required.'
        )


class ReversedWindow(OmaError):  # pylint: disable=missing-class-docstring
    def __init__(self, t0: float, t1: float):
        super().__init__(t0, t1)
        self.t0 = t0
        self.t1 = t1

    def __str__(self):
        return f'window [{self.t0}, {self.t1}) is reversed.'


class EmptyWindow(OmaError):  # pylint: disable=missing-class-docstring
    def __init__(self, t0: float, t1: float):
        super().__init__(t0, t1)
        self.t0 = t0
        self.t1 = t1

    def __str__(self):
        return f'window [{self.t0}, {self.t1}) holds fewer than two samples.'


class BandAboveNyquist(OmaError):  # pylint: disable=missing-class-docstring
    def __init__(self, band_high: float, nyquist: float):
        super().__init__(band_high, nyquist)
        self.band_high = band_high
        self.nyquist = nyquist

    def __str__(self):
        return (
            f'band upper edge {self.band_high} Hz lies above the '
            f'Nyquist frequency {self.nyquist} Hz.'
        )


class DegenerateSignal(OmaError):  # pylint: disable=missing-class-docstring
    def __init__(self, channel_id: str):
        super().__init__(channel_id)
        self.channel_id = channel_id

    def __str__(self):
        return (
            f'channel {self.channel_id} has zero magnitude inside the band; '
            'normalization is undefined.'
        )


class EmptyBand(OmaError):  # pylint: disable=missing-class-docstring
    def __init__(self, band: tuple[float, float]):
        super().__init__(band)
        self.band = band

    def __str__(self):
        return f'band {self.band} contains no spectral bins.'


class InvalidOrder(OmaError):  # pylint: disable=missing-class-docstring
    def __init__(self, order: int, add: str | None = None):
        super().__init__(order, add)
        self.order = order
        self.add = add

    def __str__(self):
        __base_text = f'model order {self.order} is invalid.'
        if self.add:
            return f'{__base_text}\nnote: {self.add}'
        return __base_text


class RankDeficient(OmaError):  # pylint: disable=missing-class-docstring
    def __init__(self, order: int, ratio: float):
        super().__init__(order, ratio)
        self.order = order
        self.ratio = ratio

    def __str__(self):
        return (
            f'block Hankel matrix has rank below {self.order} '
            f'(s_order / s_1 = {self.ratio:.3e}).'
        )


class DegenerateShape(OmaError):  # pylint: disable=missing-class-docstring
    def __str__(self):
        return 'mode shape vector has zero norm.'


class NoDecayDetected(OmaError):  # pylint: disable=missing-class-docstring
    def __init__(self, channel_id: str, add: str | None = None):
        super().__init__(channel_id, add)
        self.channel_id = channel_id
        self.add = add

    def __str__(self):
        __base_text = f'no decaying envelope found on channel {self.channel_id}.'
        if self.add:
            return f'{__base_text}\nnote: {self.add}'
        return __base_text


class SegmentTooShort(OmaError):  # pylint: disable=missing-class-docstring
    def __init__(self, channel_id: str, add: str):
        super().__init__(channel_id, add)
        self.channel_id = channel_id
        self.add = add

    def __str__(self):
        return f'decay segment of channel {self.channel_id} is too short: {self.add}'


class NonPositiveAmplitude(OmaError):  # pylint: disable=missing-class-docstring
    def __init__(self, amplitude: float):
        super().__init__(amplitude)
        self.amplitude = amplitude

    def __str__(self):
        return f'peak amplitude must be positive, got {self.amplitude}.'


class NoUsableChannel(OmaError):  # pylint: disable=missing-class-docstring
    def __init__(self, mode_label: str, failures: list[str]):
        super().__init__(mode_label, failures)
        self.mode_label = mode_label
        self.failures = failures

    def __str__(self):
        return (
            f'no channel produced a damping estimate for {self.mode_label}.\n'
            + '\n'.join(self.failures)
        )


class LabelMismatch(OmaError):  # pylint: disable=missing-class-docstring
    def __init__(self, missing: list[str], unexpected: list[str]):
        super().__init__(missing, unexpected)
        self.missing = missing
        self.unexpected = unexpected

    def __str__(self):
        return (
            'labels of both lists must match.\n'
            f'missing in reference: {self.missing}\n'
            f'unexpected in reference: {self.unexpected}'
        )


class UnknownMode(OmaError):  # pylint: disable=missing-class-docstring
    def __init__(self, label: str):
        super().__init__(label)
        self.label = label

    def __str__(self):
        return f'mode {self.label} is not part of the model.'


class PositionOutsideSpan(OmaError):  # pylint: disable=missing-class-docstring
    def __init__(self, position: float, span_length: float):
        super().__init__(position, span_length)
        self.position = position
        self.span_length = span_length

    def __str__(self):
        return (
            f'position {self.position} m lies outside the span '
            f'[0, {self.span_length}] m.'
        )


class NoRecords(OmaError):  # pylint: disable=missing-class-docstring
    def __init__(self, location: str):
        super().__init__(location)
        self.location = location

    def __str__(self):
        return f'no records found in {self.location}.'
