export {
  MalformedSummary,
  MissingColumn,
  okColumn,
  parseScanCsv,
  requireColumns,
  requireSummaryNumber,
} from "./csv.js";
export type { Cell, ScanTable } from "./csv.js";
export {
  renderAlignment,
  renderDetuning,
  renderFigure,
  renderFigureFile,
  renderSlab,
  renderValidation,
} from "./figures.js";
export type { FigureKind, FigureSpec } from "./figures.js";
export { el, escapeText, label3, polyline, scaleLinear, scaleLog, svgDocument, text } from "./svg.js";
