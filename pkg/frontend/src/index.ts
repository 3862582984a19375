export { parseSweepCsv, distinct, CsvContractError, SweepTable } from "./csv.js";
export {
  FigureKind,
  FigureSpec,
  cellCount,
  curveCount,
  renderAblation,
  renderCurves,
  renderHeatmap,
  validateSpec,
} from "./render.js";
export { viridis } from "./colormap.js";
