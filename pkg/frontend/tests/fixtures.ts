/** Inline CSV fixtures mirroring the producing CLI's schemas. */

export const FOLIATE_CSV = [
  "s,r,T,drT,dsT,region",
  // s=2: interior up to r=1, exterior from r=2
  "2,0,2,0,1,interior",
  "2,0.5,2.0615528128088303,0.24253562503633297,0.97014250014533188,interior",
  "2,1,2.2360679774997896,0.44721359549995793,0.89442719099991586,interior",
  "2,1.5,2.4568386568372225,0.29082022717270617,0.86824294732463781,transition",
  "2,2,2.5036850256919738,0,0.83333,exterior",
  "2,3,2.5036850256919738,0,0.83333,exterior",
  "3,0,3,0,1,interior",
  "3,1,3.1622776601683795,0.31622776601683794,0.94868329805051377,interior",
  "3,2,3.6055512754639891,0.55470019622522915,0.83205029433784372,interior",
  "3,3.5,4.6097722286464435,0.7224,0.7,interior",
  "3,4,4.8639,0.35,0.68,transition",
  "3,5,5.0010360284338,0,0.66,exterior",
  "3,6,5.0010360284338,0,0.66,exterior",
].join("\n") + "\n";

export const ENERGY_CSV = [
  "s,E_total,E_int,E_tran,E_ext,eta,c,form_gap",
  "2,55.910335,30.1,20.2,5.610335,0.5,1,1.2e-14",
  "3,55.796974,29.8,20.0,5.996974,0.5,1,0.9e-14",
  "4,55.724185,29.5,19.9,6.324185,0.5,1,1.1e-14",
  "5,55.675624,29.3,19.8,6.575624,0.5,1,1.0e-14",
].join("\n") + "\n";

/** synthetic sup = t^{-1.5}: fit_exponent cell carries exactly -1.5 */
export const DECAY_CSV = [
  "s,region,sup,t_char,r_sup,fit_exponent,fit_stderr",
  "2,interior,0.35355339059327379,2,0,-1.5,2.1e-16",
  "3,interior,0.19245008972987526,3,0,-1.5,2.1e-16",
  "4,interior,0.125,4,0,-1.5,2.1e-16",
  "5,interior,0.089442719099991588,5,0,-1.5,2.1e-16",
  "6,interior,0.068041381743977169,6,0,-1.5,2.1e-16",
  "8,interior,0.044194173824159223,8,0,-1.5,2.1e-16",
].join("\n") + "\n";

export const SOBOLEV_CSV = [
  "inequality,s,family,param,refinement,ratio,alarm",
  "ext_bar,3,gaussian,r5_w1,129,0.0433,0",
  "ext_bar,3,gaussian,r5_w1,258,0.0433,0",
  "ext_bar,3,gaussian,r5_w1,516,0.0433,0",
  "interior,3,gaussian,axis_f0.35,129,0.0395,0",
  "interior,3,gaussian,axis_f0.35,258,0.0395,0",
  "interior,3,gaussian,axis_f0.35,516,0.0395,0",
  "ext_flat,3,slowtail,slowtail,129,1.7864,1",
  "ext_flat,3,slowtail,slowtail,258,2.5073,1",
  "ext_flat,3,slowtail,slowtail,516,3.5678,1",
].join("\n") + "\n";

/** Rough well-formedness check: every opened tag closes in order. */
export function assertWellFormedSvg(svg: string): void {
  if (!svg.startsWith("<?xml")) throw new Error("missing XML declaration");
  const tags = svg.match(/<[^>]+>/g) ?? [];
  const stack: string[] = [];
  for (const tag of tags) {
    if (tag.startsWith("<?") || tag.endsWith("/>")) continue;
    const m = tag.match(/^<(\/?)([a-zA-Z][\w-]*)/);
    if (!m) throw new Error(`unparseable tag ${tag}`);
    const [, closing, name] = m;
    if (closing) {
      const open = stack.pop();
      if (open !== name) {
        throw new Error(`tag mismatch: </${name}> closes <${open}>`);
      }
    } else {
      stack.push(name);
    }
  }
  if (stack.length) throw new Error(`unclosed tags: ${stack.join(",")}`);
}
