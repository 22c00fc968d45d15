"""Taylor coefficient table for the Riemann-Siegel auxiliary function

    Psi(p) = cos(2*pi*(p^2 - p - 1/16)) / cos(2*pi*p),

an entire function (the cosine zeros at p = 1/4 + m/2 all cancel).  Rows are
Taylor coefficients of order 0..40 about the base points in BASES, which are
the sixteenths of [0, 1] excluding 1/4 and 3/4 so every p in [0, 1] lies
within 1/16 of a base point.

Generated once at 50-digit precision by tools/gen_psi_taylor.py; evaluating
high derivatives from these frozen coefficients is stable to machine
precision, unlike recomputing the series in double precision (the 1/cos
division amplifies roundoff geometrically near the quarter points).
"""
import numpy as np

BASES = np.array([
    0.0,
    0.0625,
    0.125,
    0.1875,
    0.3125,
    0.375,
    0.4375,
    0.5,
    0.5625,
    0.625,
    0.6875,
    0.8125,
    0.875,
    0.9375,
    1.0,
])

COEFFS = np.array([
    [0.9238795325112867, -2.4044709195373852, 2.4044709195373852, 4.831732974255696, -18.23665100029955, 27.768139197712806, -15.820784513171702, -20.336734812545103, 59.99617699122903, -68.95517415636012, 31.228976891977158, 32.592241425142255, -78.95180433082268, 76.12414335928776, -29.354061692816728, -26.42797981725707, 55.658791106959534, -47.15341933264926, 16.09516535962625, 12.91988971723833, -24.41467776304716, 18.663106737041602, -5.776469631622845, -4.223687996035914, 7.301915487919659, -5.125471098485583, 1.4618325666416374, 0.9880929370586097, -1.5838904887022949, 1.0336863431045848, -0.2748135073025154, -0.17356342887306678, 0.26053954230232906, -0.1595628799029584, 0.039886773546348654, 0.02372998175666013, -0.0336133622662075, 0.019457262717954435, -0.004604288605126284, -0.002596877636891503, 0.003492111454294448],
    [0.7839193936711862, -2.06307823645281, 2.946855506403439, 1.2720261254582932, -10.603662807414015, 20.8629753215736, -19.45959910941552, 0.9913053090607405, 27.502645334035353, -45.906693704278275, 38.095975732157065, -6.3874452374406765, -29.18408830132166, 45.64311617698504, -35.022440941528664, 7.846484128130282, 16.76293902506447, -25.669277589936836, 18.646994260383817, -4.7855549615681605, -6.011364064731555, 9.268227447323413, -6.474139166160509, 1.7938023346304308, 1.4661684835588087, -2.3295892332988206, 1.5813443680018986, -0.459691229366204, -0.25734078776324537, 0.43101500978726637, -0.2864820858359489, 0.08601797926373139, 0.03379044211652455, -0.061141184918128984, 0.040025001817364174, -0.012297769152418455, -0.0034071416513631785, 0.006859686639311079, -0.004443711616395995, 0.0013889308722998027, 0.0002677860302808515],
    [0.6666556584777465, -1.688688368963032, 2.9833780963788428, -0.6571621054072253, -5.191397493998308, 13.94360198199289, -16.841328023968106, 9.353120639531006, 7.948933850458886, -24.602492533444437, 28.861440443966007, -17.264534189065685, -3.3431862379736876, 19.719654793325, -23.262972385945332, 14.341625557056894, -0.7898212709457005, -8.865111597295911, 10.855112058624842, -6.850210769857014, 1.2266132249272164, 2.504225862244558, -3.301247932597384, 2.1298274822067578, -0.5353482455300218, -0.47470670214302446, 0.7052888809958034, -0.4659551488740854, 0.1390646801977891, 0.06222435090931107, -0.11145785918118808, 0.07568096062469873, -0.025113145407927903, -0.0055469581545327055, 0.013528069974690667, -0.009490029779569758, 0.0033897204621234083, 0.0002872414729868032, -0.001297407491520002, 0.0009465317785641134, -0.0003574720911441041],
    [0.5725391318949016, -1.327565412103995, 2.768871717464862, -1.4872638960208178, -1.7350228508046288, 8.463184185010345, -12.299664383857523, 10.625693834154967, -1.5170119959837869, -10.277906358977898, 17.19190284474891, -15.540855132338107, 5.939418583622164, 4.895004272917772, -11.225095578884986, 10.623983644094835, -5.2155059247981885, -0.7296241991125026, 4.138952831273916, -4.2413223786025664, 2.3528192073307497, -0.2496096281646478, -0.9549830600872473, 1.1075014965346899, -0.6672073433857365, 0.15414469122071814, 0.14409578678649201, -0.2030158309704872, 0.1313436335775295, -0.040388516516297886, -0.013844033323715877, 0.02740533498998588, -0.019071752055154666, 0.006880355893746758, 0.000634396958215726, -0.0028160600681129662, 0.0021292889950761474, -0.000856007282422757, 3.8580280261708596e-05, 0.00022515345664424397, -0.00018841744082534568],
    [0.4467449445190489, -0.7102653774608663, 2.1752545674810997, -1.4271071386181207, 1.3441721069866137, 2.350204672727935, -4.66649720263855, 6.265498727441729, -5.189838010106388, 0.7518176098770196, 2.7551299268698997, -5.788992396450401, 5.127024688142614, -2.7226947323297477, -0.14475318826447822, 2.2357754893413433, -2.439047403594032, 1.6855977104372966, -0.4653496179722677, -0.3934606585345481, 0.6623005462384309, -0.5359681798412124, 0.22696434141723212, 0.0071114119585940685, -0.11039119420196757, 0.10698277917831216, -0.05638199247564068, 0.011989567246529198, 0.011156130358369635, -0.014613550898691605, 0.009114371158611082, -0.0030441801626951244, -0.0005052289382465692, 0.0014227223471946532, -0.001052049470042169, 0.0004368060683875586, -3.579736482182469e-05, -9.923209019574673e-05, 9.11259797128402e-05, -4.4117859313906705e-05, 9.270849128877942e-06],
    [0.4105245275223574, -0.45361473433523286, 1.94396268470582, -1.0189711135046458, 1.8532966212844721, 1.0452425758489912, -2.4710191249664386, 3.8314660100657565, -4.480435468970717, 1.4760134359296602, -0.0899565311664096, -2.7485688995116235, 3.0533798359826925, -2.208857172022149, 1.0630418905887848, 0.5844273253325443, -0.9797390024888085, 1.0402699154522277, -0.5902177012399895, 0.07757128893953619, 0.15351093541463018, -0.2540517775108224, 0.1664831672842306, -0.06498827667202016, -0.004124816104979693, 0.036530087125896366, -0.02940408009616472, 0.015887446326133828, -0.003213331161813153, -0.0030157713394484836, 0.003516207281878361, -0.002331193368248338, 0.0007608637615739151, 7.570197617342202e-05, -0.0002920878374643274, 0.00023697621548725346, -9.873694154897279e-05, 1.522373247666139e-05, 1.628661858693544e-05, -1.769407814522326e-05, 8.919646725846308e-06],
    [0.38954758046941734, -0.22068353196743618, 1.7983979816807516, -0.5250684970895884, 2.063275792879931, 0.3744032628915442, -1.2558750096848357, 1.7844317190451109, -3.7561586656627868, 0.9713466312538891, -1.3291173663002571, -1.028285236017935, 1.679777719969312, -1.1398231692220973, 1.2979489679223948, 0.04588353204553632, -0.2017483312561108, 0.45140712388075244, -0.4501405882351999, 0.11502508614086848, -0.056977647577217974, -0.08593201484798346, 0.0835579636895683, -0.04314084244908505, 0.02572746879732546, 0.007253807715334145, -0.0088951331781264, 0.007993782293745828, -0.004846406840058188, 0.00025386185849676914, 0.00043046185709127516, -0.0009235644340881693, 0.0005749749394539641, -0.00014605556694415652, 2.2643655650072232e-05, 7.066363725975184e-05, -4.769659187855213e-05, 2.0218137983195787e-05, -6.327190060136673e-06, -3.433137765262937e-06, 2.862568389844572e-06],
    [0.3826834323650898, 0.0, 1.7489618723100817, 0.0, 2.118025207685496, 0.0, -0.8707216670511481, 1.2329440808531897e-51, -3.4733112243465167, 6.943737188133717e-52, -1.6626947308999325, -5.716470323475554e-52, 1.216731288919232, -6.657908091833823e-52, 1.3014304161007977, -1.6564596426833198e-53, 0.03051102182736167, 2.1174703286258624e-52, -0.3755803051545095, 6.23486503612603e-53, -0.1085784416564066, -2.9763841670841987e-53, 0.051832902999549624, -1.6913296361665453e-53, 0.029999480619902277, 1.2356197818883989e-54, -0.0022759396706125644, 2.2420917274953917e-54, -0.004382647416580339, 1.909464435134412e-55, -0.0004064230183729847, -1.6730244978210505e-55, 0.0004006097785422114, -3.184515332787261e-56, 8.971057991388841e-05, 6.490773086456752e-57, -2.3025650027239108e-05, 1.8607049292740529e-57, -9.380006601906792e-06, -6.602057654574266e-59, 6.323514947609108e-07],
    [0.38954758046941734, 0.22068353196743618, 1.7983979816807516, 0.5250684970895884, 2.063275792879931, -0.3744032628915442, -1.2558750096848357, -1.7844317190451109, -3.7561586656627868, -0.9713466312538891, -1.3291173663002571, 1.028285236017935, 1.679777719969312, 1.1398231692220973, 1.2979489679223948, -0.04588353204553632, -0.2017483312561108, -0.45140712388075244, -0.4501405882351999, -0.11502508614086848, -0.056977647577217974, 0.08593201484798346, 0.0835579636895683, 0.04314084244908505, 0.02572746879732546, -0.007253807715334145, -0.0088951331781264, -0.007993782293745828, -0.004846406840058188, -0.00025386185849676914, 0.00043046185709127516, 0.0009235644340881693, 0.0005749749394539641, 0.00014605556694415652, 2.2643655650072232e-05, -7.066363725975184e-05, -4.769659187855213e-05, -2.0218137983195787e-05, -6.327190060136673e-06, 3.433137765262937e-06, 2.862568389844572e-06],
    [0.4105245275223574, 0.45361473433523286, 1.94396268470582, 1.0189711135046458, 1.8532966212844721, -1.0452425758489912, -2.4710191249664386, -3.8314660100657565, -4.480435468970717, -1.4760134359296602, -0.0899565311664096, 2.7485688995116235, 3.0533798359826925, 2.208857172022149, 1.0630418905887848, -0.5844273253325443, -0.9797390024888085, -1.0402699154522277, -0.5902177012399895, -0.07757128893953619, 0.15351093541463018, 0.2540517775108224, 0.1664831672842306, 0.06498827667202016, -0.004124816104979693, -0.036530087125896366, -0.02940408009616472, -0.015887446326133828, -0.003213331161813153, 0.0030157713394484836, 0.003516207281878361, 0.002331193368248338, 0.0007608637615739151, -7.570197617342202e-05, -0.0002920878374643274, -0.00023697621548725346, -9.873694154897279e-05, -1.522373247666139e-05, 1.628661858693544e-05, 1.769407814522326e-05, 8.919646725846308e-06],
    [0.4467449445190489, 0.7102653774608663, 2.1752545674810997, 1.4271071386181207, 1.3441721069866137, -2.350204672727935, -4.66649720263855, -6.265498727441729, -5.189838010106388, -0.7518176098770196, 2.7551299268698997, 5.788992396450401, 5.127024688142614, 2.7226947323297477, -0.14475318826447822, -2.2357754893413433, -2.439047403594032, -1.6855977104372966, -0.4653496179722677, 0.3934606585345481, 0.6623005462384309, 0.5359681798412124, 0.22696434141723212, -0.0071114119585940685, -0.11039119420196757, -0.10698277917831216, -0.05638199247564068, -0.011989567246529198, 0.011156130358369635, 0.014613550898691605, 0.009114371158611082, 0.0030441801626951244, -0.0005052289382465692, -0.0014227223471946532, -0.001052049470042169, -0.0004368060683875586, -3.579736482182469e-05, 9.923209019574673e-05, 9.11259797128402e-05, 4.4117859313906705e-05, 9.270849128877942e-06],
    [0.5725391318949016, 1.327565412103995, 2.768871717464862, 1.4872638960208178, -1.7350228508046288, -8.463184185010345, -12.299664383857523, -10.625693834154967, -1.5170119959837869, 10.277906358977898, 17.19190284474891, 15.540855132338107, 5.939418583622164, -4.895004272917772, -11.225095578884986, -10.623983644094835, -5.2155059247981885, 0.7296241991125026, 4.138952831273916, 4.2413223786025664, 2.3528192073307497, 0.2496096281646478, -0.9549830600872473, -1.1075014965346899, -0.6672073433857365, -0.15414469122071814, 0.14409578678649201, 0.2030158309704872, 0.1313436335775295, 0.040388516516297886, -0.013844033323715877, -0.02740533498998588, -0.019071752055154666, -0.006880355893746758, 0.000634396958215726, 0.0028160600681129662, 0.0021292889950761474, 0.000856007282422757, 3.8580280261708596e-05, -0.00022515345664424397, -0.00018841744082534568],
    [0.6666556584777465, 1.688688368963032, 2.9833780963788428, 0.6571621054072253, -5.191397493998308, -13.94360198199289, -16.841328023968106, -9.353120639531006, 7.948933850458886, 24.602492533444437, 28.861440443966007, 17.264534189065685, -3.3431862379736876, -19.719654793325, -23.262972385945332, -14.341625557056894, -0.7898212709457005, 8.865111597295911, 10.855112058624842, 6.850210769857014, 1.2266132249272164, -2.504225862244558, -3.301247932597384, -2.1298274822067578, -0.5353482455300218, 0.47470670214302446, 0.7052888809958034, 0.4659551488740854, 0.1390646801977891, -0.06222435090931107, -0.11145785918118808, -0.07568096062469873, -0.025113145407927903, 0.0055469581545327055, 0.013528069974690667, 0.009490029779569758, 0.0033897204621234083, -0.0002872414729868032, -0.001297407491520002, -0.0009465317785641134, -0.0003574720911441041],
    [0.7839193936711862, 2.06307823645281, 2.946855506403439, -1.2720261254582932, -10.603662807414015, -20.8629753215736, -19.45959910941552, -0.9913053090607405, 27.502645334035353, 45.906693704278275, 38.095975732157065, 6.3874452374406765, -29.18408830132166, -45.64311617698504, -35.022440941528664, -7.846484128130282, 16.76293902506447, 25.669277589936836, 18.646994260383817, 4.7855549615681605, -6.011364064731555, -9.268227447323413, -6.474139166160509, -1.7938023346304308, 1.4661684835588087, 2.3295892332988206, 1.5813443680018986, 0.459691229366204, -0.25734078776324537, -0.43101500978726637, -0.2864820858359489, -0.08601797926373139, 0.03379044211652455, 0.061141184918128984, 0.040025001817364174, 0.012297769152418455, -0.0034071416513631785, -0.006859686639311079, -0.004443711616395995, -0.0013889308722998027, 0.0002677860302808515],
    [0.9238795325112867, 2.4044709195373852, 2.4044709195373852, -4.831732974255696, -18.23665100029955, -27.768139197712806, -15.820784513171702, 20.336734812545103, 59.99617699122903, 68.95517415636012, 31.228976891977158, -32.592241425142255, -78.95180433082268, -76.12414335928776, -29.354061692816728, 26.42797981725707, 55.658791106959534, 47.15341933264926, 16.09516535962625, -12.91988971723833, -24.41467776304716, -18.663106737041602, -5.776469631622845, 4.223687996035914, 7.301915487919659, 5.125471098485583, 1.4618325666416374, -0.9880929370586097, -1.5838904887022949, -1.0336863431045848, -0.2748135073025154, 0.17356342887306678, 0.26053954230232906, 0.1595628799029584, 0.039886773546348654, -0.02372998175666013, -0.0336133622662075, -0.019457262717954435, -0.004604288605126284, 0.002596877636891503, 0.003492111454294448],
])
