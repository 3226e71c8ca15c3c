# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, you can obtain one at http://mozilla.org/MPL/2.0/.
import logging
import os
import shutil
from io import BytesIO

logger = logging.getLogger(__name__)


class StoreError(Exception):
    pass


class DirectoryStore:
    """
    Run reports kept as files under an output directory.

    Keys are '/'-separated paths relative to the root, such as 'verify-all.json' or
    'run1/lemma21.timings.json'.
    """

    def __init__(self, root):
        self.root = root

    def _path(self, key):
        if not key or key.startswith('/') or '..' in key.split('/'):
            raise StoreError('Report key "{}" must be a relative path inside {}'
                             .format(key, self.root))
        return os.path.join(self.root, *key.split('/'))

    def get_key(self, key):
        """The stored bytes under key, as a file object."""
        try:
            with open(self._path(key), 'rb') as f:
                return BytesIO(f.read())
        except IOError:
            raise StoreError('No report "{}" under {}'.format(key, self.root))

    def upload_file(self, file_obj, prefix, name):
        """Write file_obj to prefix + name, creating directories as needed."""
        path = self._path(''.join([prefix, name]))
        directory = os.path.dirname(path)
        if not os.path.isdir(directory):
            os.makedirs(directory)
        with open(path, 'wb') as f:
            shutil.copyfileobj(file_obj, f)
        logger.debug('Saved %s', path)
