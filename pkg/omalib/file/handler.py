"""
This module is used for general file operations:
classifying the files of a measurement directory and writing result tables.
"""

import json
import logging
import mimetypes
import os
from typing import Literal

import pandas as pd

from omalib.exceptions.exception import (FilePathDoesNotExists,
                                         FilePathIsNotFile, UnwritablePath)

logger = logging.getLogger(__name__)

SIDECAR_SUFFIX = '.meta.json'
FLOAT_FORMAT = '%.17g'


def sidecar_path(data_path: str) -> str:
    """
    ## Summary
    Return the metadata sidecar path belonging to a sample CSV.

    ## Args:
    - data_path (str) : e.g. "run01.csv"

    ## Returns:
    - str : e.g. "run01.meta.json"
    """
    _root, _ext = os.path.splitext(data_path)
    if _ext.lower() != '.csv':
        _root = data_path
    return f'{_root}{SIDECAR_SUFFIX}'


def get_file_type(
    filepath: str,
) -> Literal["record", "table", "sidecar", "json", "svg", "unknown"]:
    """
    ## Summary
    Return file type string.

    ## Description
    To add file types, edit filetypes.json in the "resource" folder.
    A CSV is a "record" when its metadata sidecar exists next to it,
    otherwise a plain "table".

    ## Args:
    - filepath (str) :
        Path of the target file.

    ## Returns:
    - str: "record", "table", "sidecar", "json", "svg" or "unknown"
    """
    if filepath.endswith(SIDECAR_SUFFIX):
        return "sidecar"
    _json_filetypes_path = os.path.join(
        os.path.dirname(__file__), "resource/filetypes.json"
    )
    with open(file=_json_filetypes_path, mode="rt", encoding="utf-8") as file_:
        dict_filetypes = json.load(file_)
    guess_mimetype = mimetypes.guess_type(filepath)[0]
    file_type = dict_filetypes.get(guess_mimetype)
    if not file_type:
        return "unknown"
    if file_type == "table" and os.path.isfile(sidecar_path(filepath)):
        return "record"
    return file_type


def require_file(filepath: str) -> str:
    """
    ## Summary
    Raise if the path does not point at an existing file.

    ## Args:
    - filepath (str)

    ## Returns:
    - str: The same path.
    """
    if not os.path.exists(filepath):
        raise FilePathDoesNotExists(file_path=filepath)
    if not os.path.isfile(filepath):
        raise FilePathIsNotFile(file_path=filepath)
    return filepath


def find_records(directory: str, recursive: bool = False) -> list[str]:
    """
    ## Summary
    List the record CSV files (those with a sidecar) of a directory.

    ## Args:
    - directory (str) :
        Measurement directory.
    - recursive (bool, optional) :
        Descend into sub-directories. Defaults to False.

    ## Returns:
    - list[str]: Paths sorted by path name.
    """
    if not os.path.isdir(directory):
        raise FilePathDoesNotExists(file_path=directory)
    _found: list[str] = []
    for _root, _dirs, _files in os.walk(directory):
        _dirs.sort()
        for _name in sorted(_files):
            _path = os.path.join(_root, _name)
            if get_file_type(filepath=_path) == "record":
                _found.append(_path)
        if not recursive:
            break
    logger.debug('%d record(s) found in %s', len(_found), directory)
    return sorted(_found)


def ensure_directory(directory: str) -> str:
    """
    ## Summary
    Create an output directory (and parents) if needed.

    ## Args:
    - directory (str)

    ## Returns:
    - str: The same path.
    """
    try:
        os.makedirs(directory, exist_ok=True)
    except OSError as error:
        raise UnwritablePath(file_path=directory, reason=str(error)) from error
    return directory


def write_table(frame: pd.DataFrame, output_filepath: str) -> str:
    """
    ## Summary
    Write a result table as CSV with full float precision.

    ## Args:
    - frame (pandas.DataFrame) :
        Table to write. Column names become the header row.
    - output_filepath (str) :
        Destination. The parent directory must exist.

    ## Returns:
    - str: Path of the written file.
    """
    _parent = os.path.dirname(os.path.abspath(output_filepath))
    if not os.path.isdir(_parent):
        raise UnwritablePath(file_path=output_filepath, reason='directory does not exist')
    frame.to_csv(
        output_filepath,
        index=False,
        float_format=FLOAT_FORMAT,
        lineterminator='\n',
    )
    logger.info('table written: %s', output_filepath)
    return output_filepath
