/** Browser file download of a result payload with the right extension. */

import type {ResultFormat} from './api';

export const FORMAT_EXTENSIONS: Record<ResultFormat, string> = {
  json: '.json',
  csv: '.csv',
  rawf64: '.rawf64',
};

export const FORMAT_MIME: Record<ResultFormat, string> = {
  json: 'application/json',
  csv: 'text/csv',
  rawf64: 'application/octet-stream',
};

export function downloadName(base: string, format: ResultFormat): string {
  return base + FORMAT_EXTENSIONS[format];
}

export function saveBlob(bytes: ArrayBuffer, name: string, mime: string): void {
  const blob = new Blob([bytes], {type: mime});
  const url = URL.createObjectURL(blob);
  const anchor = document.createElement('a');
  anchor.href = url;
  anchor.download = name;
  anchor.click();
  URL.revokeObjectURL(url);
}
